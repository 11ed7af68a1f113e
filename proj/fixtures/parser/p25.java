class Clone4 {
    int scale(int v) {
        int bump = v * 6;
        if (bump > 50) {
            bump = bump - 4;
        }
        return bump;
    }
}
