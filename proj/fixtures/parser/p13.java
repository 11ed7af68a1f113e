class Calls {
    int id(int v) {
        return v;
    }

    int chain() {
        return id(id(id(4)));
    }
}
