class Widget15 {
    int level;

    int scale(int v) {
        level = level + v * 15;
        return level;
    }
}
