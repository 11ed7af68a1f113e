class Widget09 {
    int level;

    int scale(int v) {
        level = level + v * 9;
        return level;
    }
}
