class Clone7 {
    int scale(int v) {
        int bump = v * 9;
        if (bump > 80) {
            bump = bump - 7;
        }
        return bump;
    }
}
