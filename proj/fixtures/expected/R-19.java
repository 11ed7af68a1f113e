class Widget19 {
    int level;

    int scale(int v) {
        level = level + v * 19;
        return level;
    }
}
