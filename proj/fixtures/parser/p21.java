class Clone0 {
    int scale(int v) {
        int bump = v * 2;
        if (bump > 10) {
            bump = bump - 0;
        }
        return bump;
    }
}
