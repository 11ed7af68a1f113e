class Calc {
    int bump(int v) {
        return v + 1;
    }

    int run(int seed) {
        int out = bump(seed) * 2;
        return out;
    }
}
