class Anon {
    void go() {
        Runnable r = new Runnable() {
            public void run() {
                System.out.println("anon");
            }
        };
        r.run();
    }
}
