class Clone6 {
    int scale(int v) {
        int bump = v * 8;
        if (bump > 70) {
            bump = bump - 6;
        }
        return bump;
    }
}
