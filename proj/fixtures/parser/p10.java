class Outer {
    int margin;

    class Inner {
        int pad() {
            return Outer.this.margin + 1;
        }
    }
}
