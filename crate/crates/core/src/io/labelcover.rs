use crate::error::{Error, Result};
use crate::io::{parse_num, tokens};
use crate::reduction::{Edge, LabelCoverInstance, Labeling};

/// Content lines with their 1-based numbers, `#` comments stripped.
fn content(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        (!l.trim().is_empty()).then_some((i + 1, l))
    })
}

/// `labelcover V E R L`, then `E` lines `u v pi_u[0..R] pi_v[0..R]`, all
/// 0-based.
pub fn parse_instance(text: &str) -> Result<LabelCoverInstance> {
    let mut lines = content(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, 1, "empty instance file"))?;
    let h: Vec<_> = tokens(header).collect();
    if h.len() != 5 || h[0].1 != "labelcover" {
        return Err(Error::parse(hl, 1, "expected header 'labelcover V E R L'"));
    }
    let v: usize = parse_num(h[1], hl, "vertex count")?;
    let e: usize = parse_num(h[2], hl, "edge count")?;
    let r: usize = parse_num(h[3], hl, "big label count")?;
    let l: usize = parse_num(h[4], hl, "small label count")?;
    let mut edges = Vec::with_capacity(e);
    let mut last = hl;
    for (ln, line) in lines {
        last = ln;
        if edges.len() == e {
            return Err(Error::parse(
                ln,
                1,
                format!("more than the declared {e} edges"),
            ));
        }
        let t: Vec<_> = tokens(line).collect();
        if t.len() != 2 + 2 * r {
            return Err(Error::parse(
                ln,
                1,
                format!("edge line needs {} integers, found {}", 2 + 2 * r, t.len()),
            ));
        }
        let mut ints = Vec::with_capacity(t.len());
        for (k, &tok) in t.iter().enumerate() {
            let x: usize = parse_num(tok, ln, "a nonnegative integer")?;
            let bound = if k < 2 { v } else { l };
            if x >= bound {
                let what = if k < 2 { "vertex" } else { "small label" };
                return Err(Error::parse(
                    ln,
                    tok.0,
                    format!("{what} {x} outside 0..{bound}"),
                ));
            }
            ints.push(x);
        }
        edges.push(Edge {
            u: ints[0],
            v: ints[1],
            pi_u: ints[2..2 + r].to_vec(),
            pi_v: ints[2 + r..].to_vec(),
        });
    }
    if edges.len() != e {
        return Err(Error::parse(
            last + 1,
            1,
            format!("expected {e} edges, found {}", edges.len()),
        ));
    }
    LabelCoverInstance::new(v, r, l, edges).map_err(|err| match err {
        Error::Domain(m) => Error::parse(hl, 1, m),
        other => other,
    })
}

pub fn write_instance(inst: &LabelCoverInstance) -> String {
    let mut out = format!(
        "labelcover {} {} {} {}\n",
        inst.vertices(),
        inst.edges().len(),
        inst.big_labels(),
        inst.small_labels()
    );
    for e in inst.edges() {
        let mut fields = vec![e.u.to_string(), e.v.to_string()];
        fields.extend(e.pi_u.iter().chain(&e.pi_v).map(usize::to_string));
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    out
}

/// `V` whitespace-separated labels in `0..R`.
pub fn parse_labeling(text: &str, inst: &LabelCoverInstance) -> Result<Labeling> {
    let mut labels = Vec::with_capacity(inst.vertices());
    let mut last = 1;
    for (ln, line) in content(text) {
        last = ln;
        for tok in tokens(line) {
            let x: usize = parse_num(tok, ln, "a label")?;
            if x >= inst.big_labels() {
                return Err(Error::parse(
                    ln,
                    tok.0,
                    format!("label {x} outside 0..{}", inst.big_labels()),
                ));
            }
            if labels.len() == inst.vertices() {
                return Err(Error::parse(
                    ln,
                    tok.0,
                    format!("more than {} labels", inst.vertices()),
                ));
            }
            labels.push(x);
        }
    }
    if labels.len() != inst.vertices() {
        return Err(Error::parse(
            last,
            1,
            format!(
                "expected {} labels, found {}",
                inst.vertices(),
                labels.len()
            ),
        ));
    }
    Ok(Labeling::new(labels))
}

pub fn write_labeling(l: &Labeling) -> String {
    let s: Vec<String> = l.as_slice().iter().map(usize::to_string).collect();
    s.join(" ") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::generate_planted;

    #[test]
    fn round_trip() {
        let (inst, l) = generate_planted(6, 3, 4, 2, 11, true).unwrap();
        let l = l.unwrap();
        let back = parse_instance(&write_instance(&inst)).unwrap();
        assert_eq!(back, inst);
        assert_eq!(parse_labeling(&write_labeling(&l), &inst).unwrap(), l);
    }

    #[test]
    fn comments_and_errors() {
        let text = "# tiny\nlabelcover 2 1 2 2\n0 1  0 1  1 0 # crossed\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.edges()[0].pi_v, vec![1, 0]);
        match parse_instance("labelcover 2 1 2 2\n0 1 0 5 1 0\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 7)),
            other => panic!("{other:?}"),
        }
        assert!(parse_instance("labelcover 2 2 2 2\n0 1 0 1 1 0\n").is_err());
        assert!(parse_labeling("0 1 1", &inst).is_err());
        assert!(parse_labeling("0 2", &inst).is_err());
    }
}
