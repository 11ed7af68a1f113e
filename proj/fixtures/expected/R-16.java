class Widget16 {
    int level;

    int scale(int v) {
        level = level + v * 16;
        return level;
    }
}
