class UsesBox {
    void go() {
        Box<String> b = new Box<String>();
        System.out.println(b.item);
    }
}

class Box<T> {
    T item;
}
