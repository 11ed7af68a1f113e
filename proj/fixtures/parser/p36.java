class Holder0<T> {
    T item;

    void stash(T v) {
        item = v;
    }
}
