class Holder4<T> {
    T item;

    void stash(T v) {
        item = v;
    }
}
