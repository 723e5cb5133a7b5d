//! Regenerates `instances/` at the workspace root.

use std::path::Path;

fn main() -> std::io::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../instances");
    std::fs::create_dir_all(&dir)?;
    for (name, file) in localgpd_cli::instances::all() {
        std::fs::write(dir.join(name), localgpd_cli::schema::to_pretty(&file))?;
        println!("wrote {name}");
    }
    Ok(())
}
