class Statics {
    static int count;

    static void tick() {
        count = count + 1;
    }
}
