class Widget14 {
    int level;

    int scale(int v) {
        level = level + v * 14;
        return level;
    }
}
