use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let out_dir = PathBuf::from(env::var("OUT_DIR").unwrap());
    println!("cargo:rerun-if-changed=src/lib.rs");
    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("FILLSCOPE_H".to_string()),
        cpp_compat: true,
        ..Default::default()
    };
    let bindings = cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("header generation failed");
    bindings.write_to_file(out_dir.join("fillscope.h"));
    bindings.write_to_file(crate_dir.join("include").join("fillscope.h"));
}
