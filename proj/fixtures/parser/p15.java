class Supers extends Base {
    void hook() {
        System.out.println("kid");
    }
}

class Base {
    void hook() {
        System.out.println("base");
    }
}
