class Clone2 {
    int scale(int v) {
        int bump = v * 4;
        if (bump > 30) {
            bump = bump - 2;
        }
        return bump;
    }
}
