class Job {
    int render(int rows) {
        int total = 0;
        int row = 0;
        while (row < rows) {
            total = total + row;
            row = row + 1;
        }
        return total;
    }
}
