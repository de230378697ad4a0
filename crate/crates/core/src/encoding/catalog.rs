//! Admissible defect configurations. An encoding is valid when its labelled
//! defect subgraph embeds into one of the catalog templates.

use std::sync::OnceLock;

use super::{Encoding, Mode};

/// Template label: a fixed defect value or either of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Label {
    Two,
    MinusOne,
    Any,
}

impl Label {
    fn admits(self, x: i8) -> bool {
        match self {
            Label::Two => x == 2,
            Label::MinusOne => x == -1,
            Label::Any => x == 2 || x == -1,
        }
    }
}

type Template = Vec<(usize, usize, Label)>;

/// The five undirected four-defect configurations. Vertex 0 is the centre of
/// the star carrying one 2-defect and two (-1)-defects.
fn undirected_templates() -> &'static [Template] {
    static T: OnceLock<Vec<Template>> = OnceLock::new();
    T.get_or_init(|| {
        use Label::*;
        vec![
            vec![(0, 1, Two), (0, 2, MinusOne), (0, 3, MinusOne), (4, 5, Any)],
            vec![(0, 1, Two), (0, 2, MinusOne), (0, 3, MinusOne), (3, 4, Any)],
            vec![(0, 1, MinusOne), (0, 2, MinusOne), (0, 3, Two), (3, 4, Any)],
            vec![(0, 1, Two), (0, 2, MinusOne), (0, 3, MinusOne), (1, 2, Any)],
            vec![(0, 1, Two), (0, 2, MinusOne), (0, 3, MinusOne), (2, 3, Any)],
        ]
    })
}

/// The eight directed five-arc configurations, closed under exchanging the
/// label pairs `mu/nu` and `xi/omega` and under reversing every arc.
fn directed_templates() -> &'static [Template] {
    static T: OnceLock<Vec<Template>> = OnceLock::new();
    T.get_or_init(|| {
        // Labels: 0 = mu, 1 = nu, 2 = xi, 3 = omega.
        let base: [[(usize, usize, u8); 5]; 8] = [
            [(0, 1, 0), (0, 2, 0), (0, 3, 1), (4, 0, 3), (4, 5, 2)],
            [(0, 1, 0), (0, 2, 0), (0, 3, 1), (4, 0, 3), (4, 3, 2)],
            [(0, 1, 1), (0, 2, 0), (0, 3, 0), (4, 0, 3), (4, 3, 2)],
            [(0, 1, 0), (0, 2, 0), (0, 3, 1), (3, 0, 3), (3, 4, 2)],
            [(0, 1, 1), (0, 2, 0), (0, 3, 0), (3, 0, 3), (3, 4, 2)],
            [(0, 1, 0), (0, 2, 0), (0, 3, 1), (3, 0, 3), (3, 1, 2)],
            [(0, 1, 1), (0, 2, 0), (0, 3, 0), (3, 0, 3), (3, 1, 2)],
            [(0, 1, 0), (0, 2, 1), (0, 3, 0), (3, 0, 3), (3, 1, 2)],
        ];
        let mut out = Vec::new();
        for t in &base {
            for (mu, xi) in [(true, true), (true, false), (false, true), (false, false)] {
                let label = |k: u8| {
                    let first = match k {
                        0 => mu,
                        1 => !mu,
                        2 => xi,
                        _ => !xi,
                    };
                    if first {
                        Label::Two
                    } else {
                        Label::MinusOne
                    }
                };
                for reverse in [false, true] {
                    out.push(
                        t.iter()
                            .map(|&(u, v, k)| if reverse { (v, u, label(k)) } else { (u, v, label(k)) })
                            .collect(),
                    );
                }
            }
        }
        out
    })
}

/// Injective map from defect vertices to template vertices sending each
/// defect to a distinct template edge (or arc) with a compatible label.
fn embeds(defects: &[(usize, usize, i8)], template: &Template, directed: bool) -> bool {
    if defects.len() > template.len() {
        return false;
    }
    let mut map: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; template.len()];
    embed_rec(0, defects, template, directed, &mut map, &mut used)
}

fn lookup(map: &[(usize, usize)], v: usize) -> Option<usize> {
    map.iter().find(|&&(a, _)| a == v).map(|&(_, b)| b)
}

fn embed_rec(
    i: usize,
    defects: &[(usize, usize, i8)],
    template: &Template,
    directed: bool,
    map: &mut Vec<(usize, usize)>,
    used: &mut [bool],
) -> bool {
    let Some(&(u, v, x)) = defects.get(i) else {
        return true;
    };
    for (k, &(s, t, label)) in template.iter().enumerate() {
        if used[k] || !label.admits(x) {
            continue;
        }
        let orientations: &[(usize, usize)] = if directed { &[(s, t)] } else { &[(s, t), (t, s)] };
        for &(s, t) in orientations {
            let mut added = 0;
            let mut ok = true;
            for (a, b) in [(u, s), (v, t)] {
                match lookup(map, a) {
                    Some(img) => ok &= img == b,
                    None => {
                        if map.iter().any(|&(_, img)| img == b) {
                            ok = false;
                        } else {
                            map.push((a, b));
                            added += 1;
                        }
                    }
                }
                if !ok {
                    break;
                }
            }
            if ok {
                used[k] = true;
                if embed_rec(i + 1, defects, template, directed, map, used) {
                    return true;
                }
                used[k] = false;
            }
            for _ in 0..added {
                map.pop();
            }
        }
    }
    false
}

fn templates(mode: Mode) -> &'static [Template] {
    match mode {
        Mode::Undirected => undirected_templates(),
        Mode::Directed => directed_templates(),
    }
}

/// Whether the defects of `l` form a sub-configuration of a catalog entry.
pub fn is_valid(l: &Encoding) -> bool {
    defects_valid(l.mode(), &l.defects())
}

pub(crate) fn defects_valid(mode: Mode, defects: &[(usize, usize, i8)]) -> bool {
    let directed = mode == Mode::Directed;
    defects.is_empty() || templates(mode).iter().any(|t| embeds(defects, t, directed))
}

/// Degree conditions on 2-defects, for undirected encodings: both ends of a
/// 2-defect have degree at least 2; a vertex on two 2-defects has degree at
/// least 4; a vertex on a 2-defect and a (-1)-defect has degree at least 3.
pub(crate) fn structure_ok(defects: &[(usize, usize, i8)], degrees: &[i64]) -> bool {
    let n = degrees.len();
    let mut twos = vec![0usize; n];
    let mut minus = vec![0usize; n];
    for &(u, v, x) in defects {
        let c = if x == 2 { &mut twos } else { &mut minus };
        c[u] += 1;
        c[v] += 1;
    }
    (0..n).all(|y| {
        let d = degrees[y];
        (twos[y] == 0 || d >= 2) && (twos[y] < 2 || d >= 4) && (twos[y] == 0 || minus[y] == 0 || d >= 3)
    })
}

/// Valid, and (undirected) the 2-defect degree conditions hold. Directed
/// encodings carry no extra conditions.
pub fn is_good(l: &Encoding) -> bool {
    let defects = l.defects();
    if !defects_valid(l.mode(), &defects) {
        return false;
    }
    match l.mode() {
        Mode::Directed => true,
        Mode::Undirected => structure_ok(&defects, &l.row_sums()),
    }
}
