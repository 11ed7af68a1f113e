class NullUse {
    String s = null;

    boolean missing() {
        return s == null;
    }
}
