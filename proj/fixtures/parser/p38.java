class Holder2<T> {
    T item;

    void stash(T v) {
        item = v;
    }
}
