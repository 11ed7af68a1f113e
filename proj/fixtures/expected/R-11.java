class Widget11 {
    int level;

    int scale(int v) {
        level = level + v * 11;
        return level;
    }
}
