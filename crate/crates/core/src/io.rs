//! File formats: edge lists, label CSVs, embedding CSVs, the binary
//! distance cache and flat `key=value` run configurations.
//!
//! Floating-point text is written with 17 significant digits so every f64
//! survives a write/read cycle unchanged.

use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use xxhash_rust::xxh3::Xxh3;

use crate::distance::{DistanceConfig, HopWeights};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeIds};
use crate::labels::LabeledDataset;
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;
use crate::solver::{EmbeddingMatrix, Init, SolverConfig, SolverTrace};

/// Formats a value with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes through a sibling temp file and renames it into place, so a failed
/// write never leaves a partial file at `path`.
pub fn write_atomically(path: &Path, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    let result = (|| {
        let mut w = BufWriter::new(File::create(&tmp)?);
        body(&mut w)?;
        w.flush()?;
        Ok(())
    })();
    match result {
        Ok(()) => {
            fs::rename(&tmp, path)?;
            Ok(())
        }
        Err(e) => {
            let _ = fs::remove_file(&tmp);
            Err(e)
        }
    }
}

pub fn write_edge_list(g: &Graph, ids: &NodeIds, w: &mut dyn Write) -> Result<()> {
    for (u, v) in g.edges() {
        writeln!(w, "{} {}", ids.name(u), ids.name(v))?;
    }
    Ok(())
}

pub fn write_labels(labels: &LabeledDataset, ids: &NodeIds, w: &mut dyn Write) -> Result<()> {
    writeln!(w, "node,label")?;
    for u in 0..labels.len() {
        writeln!(w, "{},{}", ids.name(u), labels.name_of(u))?;
    }
    Ok(())
}

fn split_fields(line: &str) -> Vec<&str> {
    if line.contains(',') {
        line.split(',').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

/// Reads a `node,label` file. Class ids follow first appearance in the file
/// and every graph node must be labelled exactly once.
pub fn read_labels<R: BufRead>(reader: R, ids: &NodeIds) -> Result<LabeledDataset> {
    let mut lines = reader.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, line)) => {
                let line = line?;
                if !line.trim().is_empty() {
                    break line;
                }
            }
            None => return Err(Error::parse(1, "missing `node,label` header")),
        }
    };
    if split_fields(header.trim()) != ["node", "label"] {
        return Err(Error::parse(1, format!("expected header `node,label`, got {header:?}")));
    }
    let mut by_node: Vec<Option<String>> = vec![None; ids.len()];
    let mut file_order = Vec::new();
    let mut unknown = Vec::new();
    for (lineno, line) in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields = split_fields(trimmed);
        let [node, label] = fields[..] else {
            return Err(Error::parse(
                lineno + 1,
                format!("expected `node,label`, got {trimmed:?}"),
            ));
        };
        file_order.push(label.to_owned());
        match ids.id(node) {
            Some(u) => {
                if by_node[u].replace(label.to_owned()).is_some() {
                    return Err(Error::DuplicateNode(node.to_owned()));
                }
            }
            None => unknown.push(node.to_owned()),
        }
    }
    if !unknown.is_empty() {
        return Err(Error::UnknownNodes(unknown));
    }
    let missing: Vec<&str> = by_node
        .iter()
        .enumerate()
        .filter(|(_, l)| l.is_none())
        .map(|(u, _)| ids.name(u))
        .collect();
    if !missing.is_empty() {
        return Err(Error::InvalidParameter(format!("nodes without a label: {missing:?}")));
    }
    // class ids follow the file, which need not be in node order
    let classes = LabeledDataset::from_names(&file_order);
    let class_names = classes.class_names().to_vec();
    let labels = by_node
        .into_iter()
        .map(|l| {
            let l = l.unwrap();
            class_names.iter().position(|c| *c == l).unwrap()
        })
        .collect();
    Ok(LabeledDataset::from_parts(labels, class_names))
}

pub fn write_embedding<T: Scalar>(x: &EmbeddingMatrix<T>, ids: &NodeIds, w: &mut dyn Write) -> Result<()> {
    if ids.len() != x.n() {
        return Err(Error::DimensionMismatch(format!(
            "{} node ids for {} embedding rows",
            ids.len(),
            x.n()
        )));
    }
    write!(w, "node")?;
    for c in 0..x.d() {
        write!(w, ",x{c}")?;
    }
    writeln!(w)?;
    for (u, row) in x.rows().enumerate() {
        write!(w, "{}", ids.name(u))?;
        for v in row {
            write!(w, ",{}", fmt_f64(v.as_f64()))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Reads an embedding CSV; returns the node names in file order.
pub fn read_embedding<T: Scalar, R: BufRead>(reader: R) -> Result<(NodeIds, EmbeddingMatrix<T>)> {
    let mut lines = reader.lines();
    let header = lines
        .next()
        .transpose()?
        .ok_or_else(|| Error::parse(1, "empty embedding file"))?;
    let cols: Vec<&str> = header.trim().split(',').collect();
    if cols.first() != Some(&"node") || cols.len() < 2 {
        return Err(Error::parse(
            1,
            format!("expected header `node,x0,...`, got {header:?}"),
        ));
    }
    for (c, name) in cols[1..].iter().enumerate() {
        if *name != format!("x{c}") {
            return Err(Error::parse(
                1,
                format!("column {} should be x{c}, got {name:?}", c + 1),
            ));
        }
    }
    let d = cols.len() - 1;
    let mut names = Vec::new();
    let mut coords = Vec::new();
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != d + 1 {
            return Err(Error::parse(
                lineno,
                format!("{} fields, header declares {}", fields.len(), d + 1),
            ));
        }
        names.push(fields[0].to_owned());
        for f in &fields[1..] {
            let v: f64 = f
                .parse()
                .map_err(|_| Error::parse(lineno, format!("not a number: {f:?}")))?;
            coords.push(T::from_f64_lossy(v));
        }
    }
    let n = names.len();
    let ids = NodeIds::from_names(names)?;
    Ok((ids, EmbeddingMatrix::new(n, d, coords)?))
}

pub fn write_trace<T: Scalar>(trace: &SolverTrace<T>, w: &mut dyn Write) -> Result<()> {
    writeln!(w, "iter,stress")?;
    for (t, s) in trace.stresses.iter().enumerate() {
        writeln!(w, "{t},{}", fmt_f64(s.as_f64()))?;
    }
    Ok(())
}

pub fn write_report(rows: &[(&str, f64)], w: &mut dyn Write) -> Result<()> {
    writeln!(w, "metric,value")?;
    for (name, v) in rows {
        writeln!(w, "{name},{}", fmt_f64(*v))?;
    }
    Ok(())
}

/// `n` on the first line, then the full matrix one row per line.
pub fn write_distance_csv(d: &DistanceMatrix<f64>, w: &mut dyn Write) -> Result<()> {
    writeln!(w, "{}", d.n())?;
    for i in 0..d.n() {
        let row: Vec<String> = d.row(i).iter().map(|&v| fmt_f64(v)).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

const CACHE_MAGIC: &[u8; 4] = b"RDM1";

/// Hash identifying a distance matrix by its inputs.
pub fn content_hash(edge_list: &[u8], cfg: &DistanceConfig) -> u64 {
    let mut h = Xxh3::new();
    h.update(&(edge_list.len() as u64).to_le_bytes());
    h.update(edge_list);
    h.update(&cfg.hops.map_or(u64::MAX, |k| k as u64).to_le_bytes());
    match &cfg.weights {
        HopWeights::Uniform(w) => {
            h.update(b"U");
            h.update(&w.to_le_bytes());
        }
        HopWeights::PerHop(ws) => {
            h.update(b"P");
            h.update(&(ws.len() as u64).to_le_bytes());
            for w in ws {
                h.update(&w.to_le_bytes());
            }
        }
    }
    h.update(&(cfg.fastdtw_radius as u64).to_le_bytes());
    h.digest()
}

/// Little-endian: magic `RDM1`, u64 `n`, u64 key, then the upper triangle
/// including the diagonal, row-major, as f64.
pub fn cache_distances(d: &DistanceMatrix<f64>, key: u64, path: &Path) -> Result<()> {
    write_atomically(path, |w| {
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&(d.n() as u64).to_le_bytes())?;
        w.write_all(&key.to_le_bytes())?;
        for i in 0..d.n() {
            for j in i..d.n() {
                w.write_all(&d.get(i, j).to_le_bytes())?;
            }
        }
        Ok(())
    })
}

/// `Ok(None)` on a key mismatch or a missing file; an error when the file
/// exists but is not a valid cache.
pub fn load_cached(path: &Path, key: u64) -> Result<Option<DistanceMatrix<f64>>> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let corrupt = |reason: &str| Error::CorruptCache {
        path: path.to_owned(),
        reason: reason.to_owned(),
    };
    let mut bytes = Vec::new();
    BufReader::new(file).read_to_end(&mut bytes)?;
    if bytes.len() < 20 || &bytes[..4] != CACHE_MAGIC {
        return Err(corrupt("bad magic"));
    }
    let word = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
    let n = usize::try_from(word(4)).map_err(|_| corrupt("size overflow"))?;
    let stored_key = word(12);
    let expected = n
        .checked_mul(n + 1)
        .map(|c| c / 2 * 8 + 20)
        .ok_or_else(|| corrupt("size overflow"))?;
    if bytes.len() != expected {
        return Err(corrupt(&format!("expected {expected} bytes, found {}", bytes.len())));
    }
    if stored_key != key {
        return Ok(None);
    }
    let mut values = bytes[20..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()));
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = values.next().unwrap();
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    DistanceMatrix::from_rows(&rows)
        .map(Some)
        .map_err(|e| corrupt(&e.to_string()))
}

/// Everything needed to run the pipeline, as a flat `key=value` file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub edges: PathBuf,
    pub labels: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub cache_dir: Option<PathBuf>,
    pub distance: DistanceConfig,
    pub solver: SolverConfig,
    pub folds: usize,
    pub runs: usize,
}

const RUN_KEYS: &[&str] = &[
    "edges",
    "labels",
    "out_dir",
    "cache_dir",
    "k",
    "weights",
    "radius",
    "d",
    "epsilon",
    "max_iters",
    "seed",
    "init_scale",
    "init",
    "folds",
    "runs",
];

impl RunConfig {
    pub fn new(edges: PathBuf, out_dir: PathBuf) -> Self {
        RunConfig {
            edges,
            labels: None,
            out_dir,
            cache_dir: None,
            distance: DistanceConfig::default(),
            solver: SolverConfig::default(),
            folds: 10,
            runs: 25,
        }
    }

    /// Parses the text form. Relative paths resolve against `base`; every
    /// input path must exist.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut cfg = RunConfig::new(PathBuf::new(), base.to_path_buf());
        let mut have_edges = false;
        for (lineno, line) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(lineno, format!("expected key=value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if !RUN_KEYS.contains(&key) {
                return Err(Error::Config(format!("line {lineno}: unknown key {key:?}")));
            }
            if !seen.insert(key.to_owned()) {
                return Err(Error::Config(format!("line {lineno}: duplicate key {key:?}")));
            }
            let bad = |what: &str| Error::Config(format!("line {lineno}: {key} must be {what}, got {value:?}"));
            let num = |what: &str| value.parse::<usize>().map_err(|_| bad(what));
            let real = || value.parse::<f64>().map_err(|_| bad("a number"));
            match key {
                "edges" => {
                    cfg.edges = base.join(value);
                    have_edges = true;
                }
                "labels" => cfg.labels = Some(base.join(value)),
                "out_dir" => cfg.out_dir = base.join(value),
                "cache_dir" => cfg.cache_dir = Some(base.join(value)),
                "k" => {
                    cfg.distance.hops = if value == "diameter" {
                        None
                    } else {
                        Some(num("an integer or `diameter`")?)
                    }
                }
                "weights" => {
                    cfg.distance.weights = parse_weights(value).ok_or_else(|| bad("a number or comma list"))?
                }
                "radius" => cfg.distance.fastdtw_radius = num("an integer")?,
                "d" => cfg.solver.d = num("an integer")?,
                "epsilon" => cfg.solver.epsilon = real()?,
                "max_iters" => cfg.solver.max_iters = num("an integer")?,
                "seed" => cfg.solver.seed = value.parse().map_err(|_| bad("an integer"))?,
                "init_scale" => cfg.solver.init_scale = real()?,
                "init" => {
                    cfg.solver.init = match value {
                        "classical" => Init::Classical,
                        "uniform" => Init::Uniform,
                        _ => return Err(bad("`classical` or `uniform`")),
                    }
                }
                "folds" => cfg.folds = num("an integer")?,
                "runs" => cfg.runs = num("an integer")?,
                _ => unreachable!(),
            }
        }
        if !have_edges {
            return Err(Error::Config("missing required key `edges`".into()));
        }
        for path in std::iter::once(&cfg.edges).chain(cfg.labels.iter()) {
            if !path.exists() {
                return Err(Error::Config(format!("{} does not exist", path.display())));
            }
        }
        cfg.solver.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            out.push_str(k);
            out.push('=');
            out.push_str(&v);
            out.push('\n');
        };
        put("edges", self.edges.display().to_string());
        if let Some(l) = &self.labels {
            put("labels", l.display().to_string());
        }
        put("out_dir", self.out_dir.display().to_string());
        if let Some(c) = &self.cache_dir {
            put("cache_dir", c.display().to_string());
        }
        put("k", self.distance.hops.map_or("diameter".into(), |k| k.to_string()));
        put(
            "weights",
            match &self.distance.weights {
                HopWeights::Uniform(w) => w.to_string(),
                HopWeights::PerHop(ws) => ws.iter().map(f64::to_string).collect::<Vec<_>>().join(","),
            },
        );
        put("radius", self.distance.fastdtw_radius.to_string());
        put("d", self.solver.d.to_string());
        put("epsilon", self.solver.epsilon.to_string());
        put("max_iters", self.solver.max_iters.to_string());
        put("seed", self.solver.seed.to_string());
        put("init_scale", self.solver.init_scale.to_string());
        put(
            "init",
            match self.solver.init {
                Init::Classical => "classical".into(),
                Init::Uniform => "uniform".into(),
            },
        );
        put("folds", self.folds.to_string());
        put("runs", self.runs.to_string());
        out
    }
}

/// A single number means the same weight on every hop; a comma list gives
/// `w_0..w_k` explicitly.
pub fn parse_weights(s: &str) -> Option<HopWeights> {
    if s.contains(',') {
        s.split(',')
            .map(|w| w.trim().parse().ok())
            .collect::<Option<Vec<f64>>>()
            .map(HopWeights::PerHop)
    } else {
        s.trim().parse().ok().map(HopWeights::Uniform)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::load_edge_list;

    fn tempdir(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("role-embed-io-{name}-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn labels_map_to_dense_classes() {
        let ids = NodeIds::sequential(3);
        let ds = read_labels("node,label\n0,a\n1,b\n2,a\n".as_bytes(), &ids).unwrap();
        assert_eq!(ds.labels(), [0, 1, 0]);
        assert_eq!(ds.class_names(), ["a", "b"]);
    }

    #[test]
    fn labels_reject_unknown_nodes() {
        let ids = NodeIds::sequential(3);
        let err = read_labels("node,label\n0,a\n99,b\n1,a\n2,a\n".as_bytes(), &ids).unwrap_err();
        assert!(err.to_string().contains("99"), "{err}");
    }

    #[test]
    fn labels_reject_duplicates_and_gaps() {
        let ids = NodeIds::sequential(2);
        assert!(matches!(
            read_labels("node,label\n0,a\n0,b\n1,a\n".as_bytes(), &ids),
            Err(Error::DuplicateNode(_))
        ));
        assert!(read_labels("node,label\n0,a\n".as_bytes(), &ids).is_err());
        assert!(read_labels("id,class\n0,a\n1,a\n".as_bytes(), &ids).is_err());
    }

    #[test]
    fn labels_accept_whitespace_columns() {
        let ids = NodeIds::sequential(2);
        let ds = read_labels("node label\n0 3\n1 1\n".as_bytes(), &ids).unwrap();
        assert_eq!(ds.class_names(), ["3", "1"]);
    }

    #[test]
    fn labels_round_trip() {
        let ids = NodeIds::from_names(["x".into(), "y".into(), "z".into()]).unwrap();
        let ds = LabeledDataset::from_names(&["p", "q", "p"]);
        let mut buf = Vec::new();
        write_labels(&ds, &ids, &mut buf).unwrap();
        assert_eq!(read_labels(buf.as_slice(), &ids).unwrap(), ds);
    }

    #[test]
    fn embedding_round_trip_is_exact() {
        let x = EmbeddingMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![0.1 + 0.2, -1e-300]]).unwrap();
        let ids = NodeIds::sequential(3);
        let mut buf = Vec::new();
        write_embedding(&x, &ids, &mut buf).unwrap();
        let (ids2, y) = read_embedding::<f64, _>(buf.as_slice()).unwrap();
        assert_eq!(ids2, ids);
        assert_eq!(x.as_slice(), y.as_slice());
        assert!(String::from_utf8(buf).unwrap().contains("3.0000000000000004e-1"));
    }

    #[test]
    fn embedding_header_must_match_columns() {
        let text = "node,x0,x1\n0,1,2,3\n";
        assert!(matches!(
            read_embedding::<f64, _>(text.as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(read_embedding::<f64, _>("node,x0,x2\n0,1,2\n".as_bytes()).is_err());
        assert!(matches!(
            read_embedding::<f64, _>("node,x0\n0,abc\n".as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn cache_round_trip_and_miss() {
        let dir = tempdir("cache");
        let path = dir.join("d.rdm");
        let d = DistanceMatrix::from_upper(4, |i, j| (i * j) as f64 / 3.0).unwrap();
        cache_distances(&d, 42, &path).unwrap();
        assert_eq!(load_cached(&path, 42).unwrap(), Some(d));
        assert_eq!(load_cached(&path, 43).unwrap(), None);
        assert_eq!(load_cached(&dir.join("absent"), 42).unwrap(), None);

        let bytes = fs::read(&path).unwrap();
        fs::write(&path, &bytes[..bytes.len() - 3]).unwrap();
        assert!(matches!(load_cached(&path, 42), Err(Error::CorruptCache { .. })));
        fs::write(&path, b"XXXX and then some more bytes").unwrap();
        assert!(matches!(load_cached(&path, 42), Err(Error::CorruptCache { .. })));
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn content_hash_depends_on_inputs() {
        let cfg = DistanceConfig::default();
        let other = DistanceConfig {
            fastdtw_radius: 2,
            ..DistanceConfig::default()
        };
        assert_eq!(content_hash(b"0 1\n", &cfg), content_hash(b"0 1\n", &cfg));
        assert_ne!(content_hash(b"0 1\n", &cfg), content_hash(b"0 2\n", &cfg));
        assert_ne!(content_hash(b"0 1\n", &cfg), content_hash(b"0 1\n", &other));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = crate::generators::gen_barbell(10, 11).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &NodeIds::sequential(31), &mut buf).unwrap();
        let loaded = load_edge_list(buf.as_slice()).unwrap();
        // ids may be renumbered by first appearance; map back through names
        let back: Vec<(usize, usize)> = loaded
            .graph
            .edges()
            .map(|(u, v)| {
                let a: usize = loaded.ids.name(u).parse().unwrap();
                let b: usize = loaded.ids.name(v).parse().unwrap();
                (a.min(b), a.max(b))
            })
            .collect();
        let mut back = back;
        back.sort_unstable();
        assert_eq!(back, g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn run_config_parses_and_validates() {
        let dir = tempdir("runcfg");
        fs::write(dir.join("g.txt"), "0 1\n").unwrap();
        let cfg = RunConfig::parse("edges=g.txt\nk=3\nweights=1,0.5,0.5,0.25\nd=3\ninit=uniform\n", &dir).unwrap();
        assert_eq!(cfg.distance.hops, Some(3));
        assert_eq!(cfg.solver.d, 3);
        assert_eq!(cfg.solver.init, Init::Uniform);
        let again = RunConfig::parse(&cfg.to_text(), &dir).unwrap();
        assert_eq!(again, cfg);

        assert!(RunConfig::parse("edges=g.txt\nbogus=1\n", &dir).is_err());
        assert!(RunConfig::parse("edges=missing.txt\n", &dir).is_err());
        assert!(RunConfig::parse("d=2\n", &dir).is_err());
        assert!(RunConfig::parse("edges=g.txt\nepsilon=0\n", &dir).is_err());
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn atomic_write_cleans_up_on_failure() {
        let dir = tempdir("atomic");
        let path = dir.join("out.csv");
        let err = write_atomically(&path, |w| {
            w.write_all(b"half")?;
            Err(Error::Config("boom".into()))
        });
        assert!(err.is_err());
        assert!(!path.exists());
        assert_eq!(fs::read_dir(&dir).unwrap().count(), 0);
        fs::remove_dir_all(dir).unwrap();
    }
}
