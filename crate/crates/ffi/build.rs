use std::env;
use std::path::PathBuf;

fn main() {
    let dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").expect("set by cargo"));
    let config = cbindgen::Config::from_file(dir.join("cbindgen.toml")).expect("cbindgen.toml");
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    match cbindgen::generate_with_config(&dir, config) {
        // only rewrites the file when the contents change
        Ok(b) => {
            b.write_to_file(dir.join("include/caustics.h"));
        }
        Err(e) => println!("cargo:warning=header not regenerated: {e}"),
    }
}
