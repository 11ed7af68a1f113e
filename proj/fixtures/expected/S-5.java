class Meter {
    int level;

    int bump(int delta) {
        level = level + delta;
        return level;
    }
}
