class Widget06 {
    int level;

    int scale(int v) {
        level = level + v * 6;
        return level;
    }
}
