class Widget13 {
    int level;

    int scale(int v) {
        level = level + v * 13;
        return level;
    }
}
