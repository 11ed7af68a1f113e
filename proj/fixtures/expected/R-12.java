class Widget12 {
    int level;

    int scale(int v) {
        level = level + v * 12;
        return level;
    }
}
