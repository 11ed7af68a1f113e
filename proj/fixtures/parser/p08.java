class Pairs<K, V> {
    K key;
    V value;
}
