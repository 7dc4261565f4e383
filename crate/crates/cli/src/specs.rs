use std::path::{Path, PathBuf};

use indminor::binshift::bs_generate;
use indminor::graph::generators::{complete, cycle, grid, path, petersen, star};
use indminor::graph::{complete_binary_tree, subdivide};
use indminor::Graph;

use crate::{CliError, CliResult};

/// Named graphs: `K5`, `C4`, `P3`, `S3` (star with 3 leaves), `B3`
/// (complete binary tree of height 3), `grid3x4`, `bs3`, `petersen`, and
/// `s<spec>` for the spec with every edge subdivided once.
pub fn parse_graph_spec(spec: &str) -> CliResult<Graph> {
    let bad = || CliError::Invalid(format!("unknown graph spec {spec:?}"));
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    if spec == "petersen" {
        return Ok(petersen());
    }
    if let Some(rest) = spec.strip_prefix("grid") {
        let (r, c) = rest.split_once('x').ok_or_else(bad)?;
        return Ok(grid(num(r)?, num(c)?));
    }
    if let Some(rest) = spec.strip_prefix("bs") {
        return Ok(bs_generate(rest.parse().map_err(|_| bad())?)?);
    }
    if let Some(rest) = spec.strip_prefix('s') {
        return Ok(subdivide(&parse_graph_spec(rest)?, 1)?.graph);
    }
    let (head, tail) = spec.split_at(spec.chars().next().map_or(0, char::len_utf8));
    let k = num(tail)?;
    match head {
        "K" if k >= 1 => Ok(complete(k)),
        "C" if k >= 3 => Ok(cycle(k)),
        "P" if k >= 1 => Ok(path(k)),
        "S" => Ok(star(k)),
        "B" => Ok(complete_binary_tree(k)?),
        _ => Err(bad()),
    }
}

/// A graph JSON file if `arg` names an existing file, a named graph
/// otherwise. The file may also be the output of `gen`. Returns the file
/// path for the manifest.
pub fn load_graph(arg: &str) -> CliResult<(Graph, Option<PathBuf>)> {
    let path = Path::new(arg);
    if path.is_file() {
        let value = read_json(path)?;
        let graph = value.get("result").filter(|r| r.get("edges").is_some()).unwrap_or(&value);
        return Ok((Graph::from_json(graph)?, Some(path.to_path_buf())));
    }
    Ok((parse_graph_spec(arg)?, None))
}

pub(crate) fn read_json(path: &Path) -> CliResult<serde_json::Value> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}
