class Strings {
    String greet(String name) {
        String msg = "hi, " + name;
        return msg;
    }
}
