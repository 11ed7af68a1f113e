class Widget08 {
    int level;

    int scale(int v) {
        level = level + v * 8;
        return level;
    }
}
