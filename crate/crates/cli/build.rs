use std::process::Command;

fn git(args: &[&str]) -> Option<String> {
    let out = Command::new("git").args(args).output().ok()?;
    if !out.status.success() {
        return None;
    }
    let s = String::from_utf8(out.stdout).ok()?.trim().to_string();
    (!s.is_empty()).then_some(s)
}

fn main() {
    let pkg = env!("CARGO_PKG_VERSION");
    let version = git(&["describe", "--tags", "--dirty"])
        .or_else(|| {
            let hash = git(&["rev-parse", "--short", "HEAD"])?;
            let dirty = if git(&["status", "--porcelain", "--untracked-files=no"]).is_some() { "-dirty" } else { "" };
            Some(format!("v{pkg}-0-g{hash}{dirty}"))
        })
        .unwrap_or_else(|| format!("v{pkg}"));
    println!("cargo:rustc-env=NRHO_ISAC_VERSION={version}");
    println!("cargo:rerun-if-changed=../../.git/HEAD");
    println!("cargo:rerun-if-changed=../../.git/refs");
}
