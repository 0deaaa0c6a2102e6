fn main() {
    println!("serrin");
}
