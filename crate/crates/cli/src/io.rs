use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use qea_core::bench::NamedCircuit;
use qea_core::circuit::{parse_circuit, Circuit};
use qea_core::generators::GeneratorSpec;

/// Reads a circuit file. JSON IR is accepted when the text starts with `{`.
pub fn load_circuit(path: &Path) -> Result<NamedCircuit> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let circuit = if text.trim_start().starts_with('{') {
        Circuit::from_json(&text).with_context(|| format!("{}: invalid circuit JSON", path.display()))?
    } else {
        parse_circuit(&text).with_context(|| format!("{}", path.display()))?
    };
    let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    Ok(NamedCircuit::new(name, circuit))
}

pub fn generate(spec: &str) -> Result<NamedCircuit> {
    let parsed: GeneratorSpec = spec.parse().with_context(|| format!("bad generator spec `{spec}`"))?;
    let circuit = parsed.generate().with_context(|| format!("cannot generate `{spec}`"))?;
    Ok(NamedCircuit::new(parsed.to_string(), circuit))
}

/// Exactly one of `file` and `spec` must be given.
pub fn single_source(file: Option<&Path>, spec: Option<&str>) -> Result<NamedCircuit> {
    match (file, spec) {
        (Some(path), None) => load_circuit(path),
        (None, Some(spec)) => generate(spec),
        (Some(_), Some(_)) => bail!("give either a circuit file or --generate, not both"),
        (None, None) => bail!("no circuit: give a circuit file or --generate <spec>"),
    }
}

pub fn sources(files: &[PathBuf], specs: &[String]) -> Result<Vec<NamedCircuit>> {
    let mut out = Vec::with_capacity(files.len() + specs.len());
    for f in files {
        out.push(load_circuit(f)?);
    }
    for s in specs {
        out.push(generate(s)?);
    }
    Ok(out)
}

/// `a..b` (inclusive) or a single `n`.
pub fn parse_qubit_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("`{t}` is not a qubit count"));
    let range = match s.split_once("..") {
        Some((a, b)) => num(a)?..=num(b.strip_prefix('=').unwrap_or(b))?,
        None => {
            let n = num(s)?;
            n..=n
        }
    };
    if range.is_empty() {
        return Err(format!("empty qubit range `{s}`"));
    }
    Ok(range)
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("cannot write in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("cannot replace {}", path.display()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_ranges() {
        assert_eq!(parse_qubit_range("3..10").unwrap(), 3..=10);
        assert_eq!(parse_qubit_range("3..=5").unwrap(), 3..=5);
        assert_eq!(parse_qubit_range("17").unwrap(), 17..=17);
        assert!(parse_qubit_range("5..3").is_err());
        assert!(parse_qubit_range("x").is_err());
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn source_selection() {
        assert!(single_source(None, None).is_err());
        assert!(single_source(Some(Path::new("x.qc")), Some("qft:3")).is_err());
        assert_eq!(single_source(None, Some("qft:3")).unwrap().circuit.n, 3);
    }
}
