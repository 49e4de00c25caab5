//! Plain-text scene files.
//!
//! ```text
//! # comment
//! universe 8
//! cell 1 2 3 4
//! cell 5..8
//! chain
//! 1..8
//! 3..8
//! 5 6 7 8
//! 7 8
//! ```
//!
//! Indices are separated by whitespace; `a..b` is an inclusive range. Every
//! line after `chain` is one subset of the chain. Without `cell` lines the
//! partition defaults to the strata of the chain, or to a single cell when
//! there is no chain either.

use super::{FilterScene, IndexSet};
use crate::error::{Error, Result};

fn indices(tokens: &[&str], line: usize) -> Result<IndexSet> {
    let bad = |t: &str| Error::SceneFormat { line, message: format!("bad index `{t}`") };
    let mut out = IndexSet::new();
    for &t in tokens {
        match t.split_once("..") {
            Some((a, b)) => {
                let a: usize = a.parse().map_err(|_| bad(t))?;
                let b: usize = b.parse().map_err(|_| bad(t))?;
                out.extend(a..=b);
            }
            None => {
                out.insert(t.parse().map_err(|_| bad(t))?);
            }
        }
    }
    Ok(out)
}

pub fn parse_scene(text: &str) -> Result<FilterScene> {
    let mut universe = None;
    let mut cells = Vec::new();
    let mut chain: Option<Vec<IndexSet>> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if let Some(chain) = chain.as_mut() {
            chain.push(indices(&tokens, line)?);
            continue;
        }
        match tokens[0] {
            "universe" => {
                let [_, n] = tokens[..] else {
                    return Err(Error::SceneFormat { line, message: "expected `universe N`".into() });
                };
                let n: usize =
                    n.parse().map_err(|_| Error::SceneFormat { line, message: format!("bad universe size `{n}`") })?;
                universe = Some(n);
            }
            "cell" => cells.push(indices(&tokens[1..], line)?),
            "chain" if tokens.len() == 1 => chain = Some(Vec::new()),
            other => {
                return Err(Error::SceneFormat { line, message: format!("unknown directive `{other}`") });
            }
        }
    }
    let universe = universe.ok_or(Error::SceneFormat { line: 0, message: "missing `universe` line".into() })?;
    if !cells.is_empty() {
        return FilterScene::new(universe, cells, chain);
    }
    let whole = FilterScene::new(universe, vec![(1..=universe).collect()], chain)?;
    match whole.strata() {
        Ok(strata) => {
            let cells = strata.into_iter().filter(|s| !s.is_empty()).collect();
            FilterScene::new(universe, cells, whole.chain)
        }
        Err(Error::MissingChain) => Ok(whole),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cells_and_chain() {
        let scene = parse_scene("universe 8\ncell 1..4\ncell 5 6 7 8\nchain\n1..8\n3..8 # tail\n5..8\n7 8\n").unwrap();
        assert_eq!(scene.partition().len(), 2);
        assert_eq!(scene.chain().unwrap().len(), 4);
        assert_eq!(scene.chain().unwrap()[3], [7, 8].into_iter().collect());
    }

    #[test]
    fn partition_defaults_to_strata() {
        let scene = parse_scene("universe 6\nchain\n1..6\n4..6\n").unwrap();
        assert_eq!(scene.partition(), &[(1..=3).collect::<IndexSet>(), (4..=6).collect()]);
        let plain = parse_scene("universe 3").unwrap();
        assert_eq!(plain.partition().len(), 1);
    }

    #[test]
    fn reports_bad_lines() {
        assert_eq!(
            parse_scene("universe 4\ncell 1 x"),
            Err(Error::SceneFormat { line: 2, message: "bad index `x`".into() })
        );
        assert!(matches!(parse_scene("cells 1"), Err(Error::SceneFormat { line: 1, .. })));
        assert!(matches!(parse_scene("cell 1"), Err(Error::SceneFormat { line: 0, .. })));
    }
}
