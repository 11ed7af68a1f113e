class Lift3 {
    void go() {
        int start = 3;
        Runnable r = () -> {
            System.out.println(start + 9);
        };
        r.run();
    }
}
