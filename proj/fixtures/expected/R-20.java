class Widget20 {
    int level;

    int scale(int v) {
        level = level + v * 20;
        return level;
    }
}
