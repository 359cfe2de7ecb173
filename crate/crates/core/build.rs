fn main() {
    // Generalized Schur (dgges) comes from the system LAPACK.
    println!("cargo:rustc-link-lib=dylib=lapack");
}
