class Price {
    int total(int price, int qty) {
        int base = price * qty + price;
        return base;
    }
}
