class ThisUse {
    int v;

    void set(int v) {
        this.v = v;
    }
}
