class Widget10 {
    int level;

    int scale(int v) {
        level = level + v * 10;
        return level;
    }
}
