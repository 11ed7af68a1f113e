class Clone8 {
    int scale(int v) {
        int bump = v * 10;
        if (bump > 90) {
            bump = bump - 8;
        }
        return bump;
    }
}
