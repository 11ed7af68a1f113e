class Clone9 {
    int scale(int v) {
        int bump = v * 11;
        if (bump > 100) {
            bump = bump - 9;
        }
        return bump;
    }
}
