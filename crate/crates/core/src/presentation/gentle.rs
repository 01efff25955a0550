use super::AlgebraPresentation;

/// Which gentleness clauses fail, in human-readable form. Empty means gentle.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GentleReport {
    pub violations: Vec<String>,
}

impl GentleReport {
    pub fn is_gentle(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_gentle(p: &AlgebraPresentation) -> GentleReport {
    let q = p.quiver();
    let mut violations = Vec::new();

    for v in 0..q.vertex_count() {
        let name = q.vertex_name(v);
        let ins = q.arrows_in(v).count();
        let outs = q.arrows_out(v).count();
        if ins > 2 {
            violations.push(format!("vertex {name} has {ins} incoming arrows"));
        }
        if outs > 2 {
            violations.push(format!("vertex {name} has {outs} outgoing arrows"));
        }
    }

    if p.binomials().next().is_some() {
        violations.push("binomial relations are not allowed".to_string());
    }
    for m in p.monomials() {
        if m.len() != 2 {
            violations.push(format!("relation `{}` does not have length 2", m.display(q)));
        }
    }

    let is_zero = |a: usize, b: usize| p.monomials().any(|m| m.arrows == [a, b]);
    for b in 0..q.arrow_count() {
        let name = &q.arrow(b).name;
        let after: Vec<usize> = q.arrows_out(q.arrow(b).target).collect();
        let zero_after = after.iter().filter(|&&c| is_zero(b, c)).count();
        let live_after = after.len() - zero_after;
        if zero_after > 1 {
            violations.push(format!("{name} is followed by {zero_after} arrows with zero composite"));
        }
        if live_after > 1 {
            violations.push(format!("{name} is followed by {live_after} arrows with nonzero composite"));
        }
        let before: Vec<usize> = q.arrows_in(q.arrow(b).source).collect();
        let zero_before = before.iter().filter(|&&a| is_zero(a, b)).count();
        let live_before = before.len() - zero_before;
        if zero_before > 1 {
            violations.push(format!("{name} is preceded by {zero_before} arrows with zero composite"));
        }
        if live_before > 1 {
            violations.push(format!("{name} is preceded by {live_before} arrows with nonzero composite"));
        }
    }

    // finite dimensionality: no cycle of arrows with nonzero consecutive
    // composites, i.e. relations alone (not the length bound) kill long paths
    if let Some(a) = nonzero_cycle(p) {
        violations.push(format!(
            "arrow {} lies on a cycle without relations; the algebra is not finite dimensional",
            q.arrow(a).name
        ));
    }

    GentleReport { violations }
}

fn nonzero_cycle(p: &AlgebraPresentation) -> Option<usize> {
    let q = p.quiver();
    let n = q.arrow_count();
    let succ = |a: usize| {
        q.arrows_out(q.arrow(a).target)
            .filter(move |&b| !p.monomials().any(|m| m.arrows == [a, b]))
    };
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    fn dfs(a: usize, state: &mut [u8], succ: &dyn Fn(usize) -> Vec<usize>) -> bool {
        state[a] = 1;
        for b in succ(a) {
            if state[b] == 1 || (state[b] == 0 && dfs(b, state, succ)) {
                return true;
            }
        }
        state[a] = 2;
        false
    }
    let succ_vec = |a: usize| succ(a).collect::<Vec<_>>();
    (0..n).find(|&a| state[a] == 0 && dfs(a, &mut state, &succ_vec))
}

#[cfg(test)]
mod tests {
    use super::super::parse_presentation;
    use super::*;

    #[test]
    fn linear_a3_variants_are_gentle() {
        for src in [
            "vertices 1 2 3\narrow a : 1 -> 2\narrow b : 2 -> 3\n",
            "vertices 1 2 3\narrow a : 1 -> 2\narrow b : 2 -> 3\nzero a b\n",
        ] {
            assert!(validate_gentle(&parse_presentation(src).unwrap()).is_gentle());
        }
    }

    #[test]
    fn three_arrows_out_is_not_gentle() {
        let p = parse_presentation(
            "vertices 1 2 3 4\narrow a : 1 -> 2\narrow b : 1 -> 3\narrow c : 1 -> 4\n",
        )
        .unwrap();
        assert!(!validate_gentle(&p).is_gentle());
    }

    #[test]
    fn two_nonzero_continuations_are_not_gentle() {
        let p = parse_presentation(
            "vertices 1 2 3 4\narrow a : 1 -> 2\narrow b : 2 -> 3\narrow c : 2 -> 4\n",
        )
        .unwrap();
        let r = validate_gentle(&p);
        assert!(!r.is_gentle());
        assert!(r.violations[0].contains("nonzero composite"));
    }

    #[test]
    fn length_three_relation_is_not_gentle() {
        let p = parse_presentation(
            "vertices 1 2 3 4\narrow a : 1 -> 2\narrow b : 2 -> 3\narrow c : 3 -> 4\nzero a b c\n",
        )
        .unwrap();
        assert!(!validate_gentle(&p).is_gentle());
    }

    #[test]
    fn unbounded_loop_is_not_gentle() {
        let p = parse_presentation("vertices 1\narrow l : 1 -> 1\nnilpotent 3\n").unwrap();
        assert!(!validate_gentle(&p).is_gentle());
        let p = parse_presentation("vertices 1\narrow l : 1 -> 1\nzero l l\nnilpotent 3\n").unwrap();
        assert!(validate_gentle(&p).is_gentle());
    }
}
