class Lift2 {
    void go() {
        int start = 2;
        Runnable r = () -> {
            System.out.println(start + 6);
        };
        r.run();
    }
}
