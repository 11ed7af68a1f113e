class Comments {
    // a line comment
    int v = 1; // trailing

    // another line comment
    int w = 2;
}
