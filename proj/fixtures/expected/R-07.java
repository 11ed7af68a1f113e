class Widget07 {
    int level;

    int scale(int v) {
        level = level + v * 7;
        return level;
    }
}
