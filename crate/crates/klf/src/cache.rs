//! Disk cache: versioned field records, binary dlog sidecars, and JSON-lines
//! fiber-sum tables. Writes go to a temp file and are renamed into place, so
//! concurrent readers never observe partial entries.

use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::field::Field;
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

pub const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct FieldRecord {
    version: u32,
    p: u64,
    d: u32,
    seed: u64,
    defining_poly: Vec<u64>,
    generator: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct SumsHeader {
    version: u32,
    p: u64,
    a: u32,
    m: u32,
    j: u32,
    n: u32,
    seed: u64,
    twist: Option<Vec<u64>>,
    count: u64,
}

#[derive(Serialize, Deserialize)]
struct SumsLine {
    i: u64,
    v: CycInt,
}

#[derive(Clone, Debug)]
pub struct DiskCache {
    root: PathBuf,
}

fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().ok_or_else(|| Error::CacheFormat("bad cache path".into()))?;
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".tmp-{}-{}",
        std::process::id(),
        path.file_name().unwrap().to_string_lossy()
    ));
    {
        let mut f = BufWriter::new(fs::File::create(&tmp)?);
        f.write_all(bytes)?;
        f.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

impl DiskCache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        DiskCache { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn field_path(&self, p: u64, d: u32, seed: u64) -> PathBuf {
        self.root.join("fields").join(format!("p{p}_d{d}_s{seed}.json"))
    }

    fn dlog_path(&self, p: u64, d: u32, seed: u64) -> PathBuf {
        self.root.join("fields").join(format!("p{p}_d{d}_s{seed}.dlog"))
    }

    fn sums_path(&self, p: u64, a: u32, m: u32, j: u32, n: u32, seed: u64, twist: &Option<Vec<u64>>) -> PathBuf {
        let tw = match twist {
            None => String::new(),
            Some(c) => format!(
                "_tw{}",
                c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("-")
            ),
        };
        self.root
            .join("sums")
            .join(format!("p{p}_a{a}_m{m}_j{j}_n{n}_s{seed}{tw}.jsonl"))
    }

    pub fn load_field(&self, p: u64, d: u32, seed: u64) -> Option<Field> {
        let bytes = fs::read(self.field_path(p, d, seed)).ok()?;
        let rec: FieldRecord = serde_json::from_slice(&bytes).ok()?;
        if rec.version != CACHE_VERSION || rec.p != p || rec.d != d {
            return None;
        }
        Field::from_parts(rec.p, rec.d, rec.seed, rec.defining_poly, rec.generator).ok()
    }

    pub fn store_field(&self, field: &Field) -> Result<()> {
        let rec = FieldRecord {
            version: CACHE_VERSION,
            p: field.p(),
            d: field.degree(),
            seed: field.seed(),
            defining_poly: field.defining_poly().to_vec(),
            generator: field.generator().coeffs,
        };
        atomic_write(
            &self.field_path(rec.p, rec.d, rec.seed),
            serde_json::to_string(&rec).unwrap().as_bytes(),
        )
    }

    /// Binary sidecar: magic, version, p, d, seed, len, then the exp table.
    pub fn load_exp_table(&self, p: u64, d: u32, seed: u64) -> Option<Vec<u32>> {
        let mut f = BufReader::new(fs::File::open(self.dlog_path(p, d, seed)).ok()?);
        let mut head = [0u8; 4 + 4 + 8 + 4 + 8 + 8];
        f.read_exact(&mut head).ok()?;
        if &head[0..4] != b"KLFD" {
            return None;
        }
        let ver = u32::from_le_bytes(head[4..8].try_into().unwrap());
        let fp = u64::from_le_bytes(head[8..16].try_into().unwrap());
        let fd = u32::from_le_bytes(head[16..20].try_into().unwrap());
        let fs_ = u64::from_le_bytes(head[20..28].try_into().unwrap());
        let len = u64::from_le_bytes(head[28..36].try_into().unwrap()) as usize;
        if ver != CACHE_VERSION || fp != p || fd != d || fs_ != seed {
            return None;
        }
        let mut buf = vec![0u8; len * 4];
        f.read_exact(&mut buf).ok()?;
        Some(
            buf.chunks_exact(4)
                .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
                .collect(),
        )
    }

    pub fn store_exp_table(&self, field: &Field, exp: &[u32]) -> Result<()> {
        let mut bytes = Vec::with_capacity(36 + exp.len() * 4);
        bytes.extend_from_slice(b"KLFD");
        bytes.extend_from_slice(&CACHE_VERSION.to_le_bytes());
        bytes.extend_from_slice(&field.p().to_le_bytes());
        bytes.extend_from_slice(&field.degree().to_le_bytes());
        bytes.extend_from_slice(&field.seed().to_le_bytes());
        bytes.extend_from_slice(&(exp.len() as u64).to_le_bytes());
        for &x in exp {
            bytes.extend_from_slice(&x.to_le_bytes());
        }
        atomic_write(&self.dlog_path(field.p(), field.degree(), field.seed()), &bytes)
    }

    /// Load a cached power-sum column: `v[i]` for subfield-unit index `i`.
    #[allow(clippy::too_many_arguments)]
    pub fn load_sums(
        &self,
        p: u64,
        a: u32,
        m: u32,
        j: u32,
        n: u32,
        seed: u64,
        twist: &Option<Vec<u64>>,
        expect: usize,
    ) -> Option<Vec<CycInt>> {
        let f = fs::File::open(self.sums_path(p, a, m, j, n, seed, twist)).ok()?;
        let mut lines = BufReader::new(f).lines();
        let head: SumsHeader = serde_json::from_str(&lines.next()?.ok()?).ok()?;
        if head.version != CACHE_VERSION || head.count as usize != expect {
            return None;
        }
        let mut out: Vec<Option<CycInt>> = vec![None; expect];
        for line in lines {
            let line = line.ok()?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: SumsLine = serde_json::from_str(&line).ok()?;
            *out.get_mut(rec.i as usize)? = Some(rec.v);
        }
        out.into_iter().collect()
    }

    #[allow(clippy::too_many_arguments)]
    pub fn store_sums(
        &self,
        p: u64,
        a: u32,
        m: u32,
        j: u32,
        n: u32,
        seed: u64,
        twist: &Option<Vec<u64>>,
        values: &[CycInt],
    ) -> Result<()> {
        let mut buf = String::new();
        let head = SumsHeader {
            version: CACHE_VERSION,
            p,
            a,
            m,
            j,
            n,
            seed,
            twist: twist.clone(),
            count: values.len() as u64,
        };
        buf.push_str(&serde_json::to_string(&head).unwrap());
        buf.push('\n');
        for (i, v) in values.iter().enumerate() {
            buf.push_str(&serde_json::to_string(&SumsLine { i: i as u64, v: v.clone() }).unwrap());
            buf.push('\n');
        }
        atomic_write(&self.sums_path(p, a, m, j, n, seed, twist), buf.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Caps;

    #[test]
    fn field_and_dlog_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::new(dir.path());
        let f = Field::new(3, 2, 0, &Caps::default()).unwrap();
        cache.store_field(&f).unwrap();
        let g = cache.load_field(3, 2, 0).unwrap();
        assert_eq!(f.defining_poly(), g.defining_poly());
        assert_eq!(f.generator().coeffs, g.generator().coeffs);
        let t = f.dlog_tables(&Caps::default()).unwrap();
        cache.store_exp_table(&f, &t.exp).unwrap();
        assert_eq!(cache.load_exp_table(3, 2, 0).unwrap(), t.exp);
        assert!(cache.load_exp_table(3, 2, 1).is_none());
    }

    #[test]
    fn sums_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::new(dir.path());
        let vals = vec![CycInt::from_integer(3, 5), CycInt::zeta_power(3, 1)];
        cache.store_sums(3, 1, 1, 2, 1, 0, &None, &vals).unwrap();
        let back = cache.load_sums(3, 1, 1, 2, 1, 0, &None, 2).unwrap();
        assert_eq!(back, vals);
        assert!(cache.load_sums(3, 1, 1, 2, 1, 0, &None, 3).is_none());
        assert!(cache.load_sums(3, 1, 1, 2, 2, 0, &None, 2).is_none());
    }
}
