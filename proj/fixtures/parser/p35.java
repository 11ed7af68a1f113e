class Lift4 {
    void go() {
        int start = 4;
        Runnable r = () -> {
            System.out.println(start + 12);
        };
        r.run();
    }
}
