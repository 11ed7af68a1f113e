class Finals {
    int go(final int v) {
        final int twice = v + v;
        return twice;
    }
}
