class Branches {
    int pick(int v) {
        if (v < 0) {
            return 0 - v;
        } else {
            return v;
        }
    }
}
