class Holder1<T> {
    T item;

    void stash(T v) {
        item = v;
    }
}
