//! Drive the file-based pipeline exactly as the `qns1d simulate` subcommand
//! does: write a key=value config, run it, and show what lands on disk.

use qns1d::cli::cli_dispatch;

fn main() -> std::io::Result<()> {
    let dir = std::env::temp_dir().join("qns1d-example");
    std::fs::create_dir_all(&dir)?;
    let cfg = dir.join("demo.cfg");
    std::fs::write(
        &cfg,
        "# gauss-bump demo run\n\
         nu = 1.0\n\
         eps = 0.25\n\
         gamma = 2.0\n\
         L = 20\n\
         N = 512\n\
         formulation = primitive\n\
         family = gauss-bump\n\
         A = 0.3\n\
         B = 0.2\n\
         sigma = 2\n\
         t_final = 1.0\n\
         snapshot_interval = 0.25\n",
    )?;

    let code = cli_dispatch(&["simulate".into(), cfg.to_string_lossy().into_owned()]);
    println!("exit code: {code}");
    for suffix in ["diagnostics.csv", "final.json", "manifest.json"] {
        let path = dir.join(format!("demo.{suffix}"));
        let len = std::fs::metadata(&path)?.len();
        println!("  {} ({len} bytes)", path.display());
    }
    let csv = std::fs::read_to_string(dir.join("demo.diagnostics.csv"))?;
    println!("\nfirst diagnostics rows:");
    for line in csv.lines().take(3) {
        println!("  {line}");
    }
    Ok(())
}
