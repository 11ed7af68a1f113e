class Lift1 {
    void go() {
        int start = 1;
        Runnable r = () -> {
            System.out.println(start + 3);
        };
        r.run();
    }
}
