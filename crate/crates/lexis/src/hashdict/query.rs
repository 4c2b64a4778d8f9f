//! Query algorithms shared by every [`ApproxDict`] backend.

use crate::hash::QueryPrecomp;
use crate::text::{WordId, JOKER};

use super::ApproxDict;

/// Reusable buffers for one query.
#[derive(Default)]
pub(crate) struct Scratch {
    word: Vec<u32>,
    list: Vec<u32>,
    list2: Vec<u32>,
}

/// All words within distance 1 of the precomputed query, appended to `out`
/// (possibly with repeats).
pub(crate) fn k1_into<D: ApproxDict + ?Sized>(d: &D, pc: &QueryPrecomp, out: &mut Vec<WordId>, sc: &mut Scratch) {
    let q = pc.query();
    let m = q.len();
    if let Some(id) = d.lookup(q, pc.hash()) {
        out.push(id);
    }
    for i in 1..=m {
        d.subst_list(pc.sub(i, JOKER), &mut sc.list);
        for &c in &sc.list {
            if c == q[i - 1] {
                continue;
            }
            sc.word.clear();
            sc.word.extend_from_slice(q);
            sc.word[i - 1] = c;
            if let Some(id) = d.lookup(&sc.word, pc.sub(i, c)) {
                out.push(id);
            }
        }
    }
    for i in 0..=m {
        d.subst_list(pc.ins(i, JOKER), &mut sc.list);
        for &c in &sc.list {
            sc.word.clear();
            sc.word.extend_from_slice(&q[..i]);
            sc.word.push(c);
            sc.word.extend_from_slice(&q[i..]);
            if let Some(id) = d.lookup(&sc.word, pc.ins(i, c)) {
                out.push(id);
            }
        }
    }
    for i in 1..=m {
        if i > 1 && q[i - 1] == q[i - 2] {
            // same word as deleting the previous position
            continue;
        }
        sc.word.clear();
        sc.word.extend_from_slice(&q[..i - 1]);
        sc.word.extend_from_slice(&q[i..]);
        if let Some(id) = d.lookup(&sc.word, pc.del(i)) {
            out.push(id);
        }
    }
}

/// Resolves a pattern of `pattern.len()` symbols with jokers at 1-based
/// positions `a < b`: the level-two list gives the character at `a`, then the
/// level-one list of the partially filled pattern gives the one at `b`.
fn two_jokers<D: ApproxDict + ?Sized>(d: &D, pc: &QueryPrecomp, pattern: &[u32], a: usize, b: usize, h: u64, out: &mut Vec<WordId>, sc: &mut Scratch) {
    d.subst_list2(h, &mut sc.list2);
    if sc.list2.is_empty() {
        return;
    }
    let list2 = std::mem::take(&mut sc.list2);
    for &c in &list2 {
        let h1 = pc.replace(h, a, JOKER, c);
        d.subst_list(h1, &mut sc.list);
        for &e in &sc.list {
            sc.word.clear();
            sc.word.extend_from_slice(pattern);
            sc.word[a - 1] = c;
            sc.word[b - 1] = e;
            if let Some(id) = d.lookup(&sc.word, pc.replace(h1, b, JOKER, e)) {
                out.push(id);
            }
        }
    }
    sc.list2 = list2;
}

/// All words within distance 2 of `pc`, appended to `out`.
///
/// Edit pairs containing a deletion reduce to distance-1 queries on `q` with
/// one position removed. The remaining pairs (two substitutions, substitution
/// and insertion, two insertions) are joker patterns resolved through the
/// level-two table.
pub(crate) fn k2_into<D: ApproxDict + ?Sized>(d: &D, pc: &QueryPrecomp, out: &mut Vec<WordId>, sc: &mut Scratch) {
    let hp = d.hasher();
    let q = pc.query().to_vec();
    let m = q.len();
    k1_into(d, pc, out, sc);
    for i in 1..=m {
        if i > 1 && q[i - 1] == q[i - 2] {
            continue;
        }
        let mut shorter = q.clone();
        shorter.remove(i - 1);
        let pcd = QueryPrecomp::new(hp, shorter);
        k1_into(d, &pcd, out, sc);
    }
    if !d.has_level2() {
        return;
    }
    let mut pattern = Vec::with_capacity(m + 2);
    // two substitutions
    for i in 1..=m {
        let hi = pc.sub(i, JOKER);
        for j in i + 1..=m {
            let h = pc.replace(hi, j, q[j - 1], JOKER);
            pattern.clear();
            pattern.extend_from_slice(&q);
            pattern[i - 1] = JOKER;
            pattern[j - 1] = JOKER;
            two_jokers(d, pc, &pattern, i, j, h, out, sc);
        }
    }
    // one insertion after gap g, one substitution at i
    for g in 0..=m {
        let hg = pc.ins(g, JOKER);
        for i in 1..=m {
            let pi = if i <= g { i } else { i + 1 };
            let h = pc.replace(hg, pi, q[i - 1], JOKER);
            pattern.clear();
            pattern.extend_from_slice(&q[..g]);
            pattern.push(JOKER);
            pattern.extend_from_slice(&q[g..]);
            pattern[pi - 1] = JOKER;
            let (a, b) = if pi < g + 1 { (pi, g + 1) } else { (g + 1, pi) };
            two_jokers(d, pc, &pattern, a, b, h, out, sc);
        }
    }
    // two insertions
    for g1 in 0..=m {
        for g2 in g1..=m {
            let h = pc.ins2(g1, g2);
            pattern.clear();
            pattern.extend_from_slice(&q[..g1]);
            pattern.push(JOKER);
            pattern.extend_from_slice(&q[g1..g2]);
            pattern.push(JOKER);
            pattern.extend_from_slice(&q[g2..]);
            two_jokers(d, pc, &pattern, g1 + 1, g2 + 2, h, out, sc);
        }
    }
}

pub(crate) fn finish(mut ids: Vec<WordId>) -> Vec<WordId> {
    ids.sort_unstable();
    ids.dedup();
    ids
}
