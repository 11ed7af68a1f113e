class Widget17 {
    int level;

    int scale(int v) {
        level = level + v * 17;
        return level;
    }
}
