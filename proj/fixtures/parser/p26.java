class Clone5 {
    int scale(int v) {
        int bump = v * 7;
        if (bump > 60) {
            bump = bump - 5;
        }
        return bump;
    }
}
