class BasePanel {
}

class Frame {
    class Panel extends BasePanel {
        void arrange() {
            int width = 4;
            System.out.println(width);
        }
    }
}
