class Clone3 {
    int scale(int v) {
        int bump = v * 5;
        if (bump > 40) {
            bump = bump - 3;
        }
        return bump;
    }
}
