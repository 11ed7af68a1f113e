class Box<T> {
    T item;

    T peek() {
        return item;
    }
}
