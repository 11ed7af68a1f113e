class Fields {
    int a;
    int b = 3;
    static int c = 4;
    String name = "hello";
}
