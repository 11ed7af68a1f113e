class Nesting {
    class Mid {
        class Leaf {
            int depth() {
                return 3;
            }
        }
    }
}
