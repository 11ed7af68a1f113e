class Lambdas {
    void go() {
        int seed = 7;
        Runnable r = () -> {
            System.out.println(seed);
        };
        r.run();
    }
}
