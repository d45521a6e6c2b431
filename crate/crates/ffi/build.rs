use std::env;
use std::path::PathBuf;

fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());

    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("AGORA_H".to_string()),
        cpp_compat: true,
        documentation: true,
        enumeration: cbindgen::EnumConfig {
            prefix_with_name: true,
            ..Default::default()
        },
        ..Default::default()
    };

    match cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
    {
        Ok(bindings) => {
            bindings.write_to_file(crate_dir.join("include").join("agora.h"));
        }
        Err(err) => {
            // keep `cargo build` usable mid-edit; the header test will fail
            // if the file is stale
            println!("cargo:warning=cbindgen failed: {err}");
        }
    }
}
