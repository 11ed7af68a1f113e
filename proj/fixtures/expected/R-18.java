class Widget18 {
    int level;

    int scale(int v) {
        level = level + v * 18;
        return level;
    }
}
