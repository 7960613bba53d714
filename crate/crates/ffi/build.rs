fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let config = cbindgen::Config::from_root_or_default(&crate_dir);
    let bindings = cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("Unable to generate C bindings");
    let path = std::path::Path::new(&crate_dir).join("include/parahiggs.h");
    let mut fresh = Vec::new();
    bindings.write(&mut fresh);
    if std::fs::read(&path).ok().as_deref() != Some(fresh.as_slice()) {
        std::fs::write(&path, fresh).expect("Unable to write include/parahiggs.h");
    }
}
