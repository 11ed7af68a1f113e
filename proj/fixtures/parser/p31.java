class Lift0 {
    void go() {
        int start = 0;
        Runnable r = () -> {
            System.out.println(start + 0);
        };
        r.run();
    }
}
