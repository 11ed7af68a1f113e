class Holder3<T> {
    T item;

    void stash(T v) {
        item = v;
    }
}
