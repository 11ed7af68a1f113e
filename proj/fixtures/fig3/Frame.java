class BasePanel {
}

class Frame {
    int margin;

    class Panel extends BasePanel {
        void arrange() {
            int width = Frame.this.margin + 4;
            System.out.println(width);
        }
    }
}
