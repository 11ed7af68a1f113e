class Clone1 {
    int scale(int v) {
        int bump = v * 3;
        if (bump > 20) {
            bump = bump - 1;
        }
        return bump;
    }
}
