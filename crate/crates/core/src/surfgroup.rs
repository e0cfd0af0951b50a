//! Surface group presentations, finite quotients and Reidemeister–Schreier.
//!
//! Words are lists of signed generator indices: `k` stands for generator
//! `k - 1` and `-k` for its inverse. The Schreier transversal is the set of
//! shortlex-minimal coset representatives over the alphabet
//! `g1 < G1 < g2 < G2 < ...` (a generator before its inverse), which makes
//! every subgroup presentation reproducible.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactq::{self, Rational};

/// A word in the free group on a fixed generator list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<i32>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(generator: usize, inverse: bool) -> Self {
        Word(vec![signed(generator, inverse)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v).reduced()
    }

    pub fn pow(&self, n: usize) -> Word {
        Word(self.0.repeat(n)).reduced()
    }

    /// Free reduction.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<i32> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// The word `w` with `self == w w`, if the letters split that way.
    pub fn square_root(&self) -> Option<Word> {
        let n = self.0.len();
        if n == 0 || !n.is_multiple_of(2) {
            return None;
        }
        let (a, b) = self.0.split_at(n / 2);
        (a == b).then(|| Word(a.to_vec()))
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut sums = vec![0i64; rank];
        for &l in &self.0 {
            let g = l.unsigned_abs() as usize - 1;
            if g < rank {
                sums[g] += i64::from(l.signum());
            }
        }
        sums
    }

    pub fn render(&self, labels: &[String]) -> String {
        self.0
            .iter()
            .map(|&l| {
                let label = labels
                    .get(l.unsigned_abs() as usize - 1)
                    .cloned()
                    .unwrap_or_else(|| format!("g{}", l.unsigned_abs()));
                if l < 0 {
                    capitalize(&label)
                } else {
                    label
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn signed(generator: usize, inverse: bool) -> i32 {
    let k = generator as i32 + 1;
    if inverse {
        -k
    } else {
        k
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn commutator(x: usize, y: usize) -> [i32; 4] {
    let (x, y) = (x as i32 + 1, y as i32 + 1);
    [x, y, -x, -y]
}

/// A finitely presented group: generator labels and relators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == label)
    }

    /// Parses `a1 b1 A1 B1`: whitespace-separated labels, uppercase = inverse.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            let first = token.chars().next().expect("non-empty token");
            let inverse = first.is_uppercase();
            let label = if inverse {
                first.to_lowercase().chain(token.chars().skip(1)).collect()
            } else {
                token.to_string()
            };
            let g = self
                .generator_index(&label)
                .ok_or_else(|| Error::UnknownGenerator(token.to_string()))?;
            letters.push(signed(g, inverse));
        }
        Ok(Word(letters))
    }

    pub fn render_word(&self, w: &Word) -> String {
        w.render(&self.generators)
    }
}

/// `π₁(S_{g,n})` with generators `a1 b1 … ag bg c1 … cn`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfacePresentation {
    pub genus: usize,
    pub punctures: usize,
    pub presentation: Presentation,
}

impl SurfacePresentation {
    pub fn closed(genus: usize) -> Self {
        SurfacePresentation::punctured(genus, 0)
    }

    /// Relator `∏[aᵢ,bᵢ]·∏cⱼ`; the closed case has no puncture loops and
    /// the sphere has no relator at all.
    pub fn punctured(genus: usize, punctures: usize) -> Self {
        let mut generators = Vec::new();
        for i in 1..=genus {
            generators.push(format!("a{i}"));
            generators.push(format!("b{i}"));
        }
        for j in 1..=punctures {
            generators.push(format!("c{j}"));
        }
        let mut relator = Vec::new();
        for i in 0..genus {
            relator.extend_from_slice(&commutator(2 * i, 2 * i + 1));
        }
        for j in 0..punctures {
            relator.push((2 * genus + j) as i32 + 1);
        }
        let relators = if relator.is_empty() {
            Vec::new()
        } else {
            vec![Word(relator)]
        };
        SurfacePresentation {
            genus,
            punctures,
            presentation: Presentation {
                generators,
                relators,
            },
        }
    }

    pub fn is_free(&self) -> bool {
        self.punctures > 0
    }

    /// For a punctured surface: the free presentation obtained by solving the
    /// relator for the last puncture loop. Rank `2g + n - 1`.
    pub fn free_presentation(&self) -> Result<Presentation> {
        if self.punctures == 0 {
            return Err(Error::Precondition(
                "closed surface groups are not free".into(),
            ));
        }
        let mut generators = self.presentation.generators.clone();
        generators.pop();
        Ok(Presentation {
            generators,
            relators: Vec::new(),
        })
    }

    pub fn euler_characteristic(&self) -> i64 {
        euler_characteristic(self.genus, self.punctures)
    }
}

impl AsRef<Presentation> for SurfacePresentation {
    fn as_ref(&self) -> &Presentation {
        &self.presentation
    }
}

impl AsRef<Presentation> for Presentation {
    fn as_ref(&self) -> &Presentation {
        self
    }
}

pub fn euler_characteristic(genus: usize, punctures: usize) -> i64 {
    2 - 2 * genus as i64 - punctures as i64
}

/// Genus of a degree-`degree` cover of a closed genus-`base_genus` surface,
/// branched over one point per entry of `branch_multiplicities`; a point
/// with multiplicity `m` has `degree / m` preimages.
pub fn riemann_hurwitz_genus(
    base_genus: usize,
    degree: usize,
    branch_multiplicities: &[usize],
) -> Result<usize> {
    if degree == 0 {
        return Err(Error::MalformedCover("degree must be positive".into()));
    }
    let d = degree as i64;
    let mut chi = d * euler_characteristic(base_genus, 0);
    for &m in branch_multiplicities {
        if m == 0 || !degree.is_multiple_of(m) {
            return Err(Error::MalformedCover(format!(
                "branch multiplicity {m} does not divide degree {degree}"
            )));
        }
        let m = m as i64;
        chi -= (d / m) * (m - 1);
    }
    if chi % 2 != 0 || chi > 2 {
        return Err(Error::MalformedCover(format!(
            "Euler characteristic {chi} is not that of a closed orientable surface"
        )));
    }
    Ok(((2 - chi) / 2) as usize)
}

/// A finite group given by its multiplication table; element `0` is the
/// identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    #[serde(skip)]
    inverses: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        for row in &table {
            if row.len() != n {
                return Err(Error::InvalidGroup("table is not square".into()));
            }
            let distinct: BTreeSet<usize> = row.iter().copied().collect();
            if distinct.len() != n || row.iter().any(|&x| x >= n) {
                return Err(Error::InvalidGroup("rows are not permutations".into()));
            }
        }
        for (i, row) in table.iter().enumerate() {
            if table[0][i] != i || row[0] != i {
                return Err(Error::InvalidGroup("element 0 is not the identity".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let inverses = (0..n)
            .map(|a| table[a].iter().position(|&x| x == 0).expect("latin row"))
            .collect();
        Ok(FiniteGroup { table, inverses })
    }

    /// `(Z/2)^rank`, elements encoded as bitmasks.
    pub fn elementary_abelian_2(rank: usize) -> Self {
        let n = 1usize << rank;
        let table = (0..n).map(|a| (0..n).map(|b| a ^ b).collect()).collect();
        FiniteGroup {
            table,
            inverses: (0..n).collect(),
        }
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order zero");
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let inverses = (0..n).map(|a| (n - a) % n).collect();
        FiniteGroup { table, inverses }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// The subgroup generated by `gens`, as a sorted element list.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order()).filter(|&x| seen[x]).collect()
    }

    pub fn is_normal(&self, subgroup: &[usize]) -> bool {
        let members: BTreeSet<usize> = subgroup.iter().copied().collect();
        (0..self.order()).all(|g| {
            subgroup
                .iter()
                .all(|&h| members.contains(&self.mul(self.mul(g, h), self.inv(g))))
        })
    }

    /// `G/N` for a normal subgroup `N`, with the projection `G -> G/N`.
    /// Cosets are numbered by their smallest element, so the identity coset is `0`.
    pub fn quotient(&self, normal: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_normal(normal) {
            return Err(Error::InvalidGroup("subgroup is not normal".into()));
        }
        let n = self.order();
        let mut projection = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if projection[g] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(g);
            for &h in normal {
                projection[self.mul(g, h)] = idx;
            }
        }
        let table = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| projection[self.mul(a, b)]).collect())
            .collect();
        Ok((FiniteGroup::from_table(table)?, projection))
    }
}

/// A homomorphism from a presented group onto (a subgroup of) a finite group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteQuotient {
    pub group: FiniteGroup,
    /// Image of each presentation generator.
    pub images: Vec<usize>,
    pub generator_labels: Vec<String>,
}

impl FiniteQuotient {
    /// Checks that every relator maps to the identity.
    pub fn new(pres: &Presentation, group: FiniteGroup, images: Vec<usize>) -> Result<Self> {
        if images.len() != pres.rank() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} generators",
                images.len(),
                pres.rank()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&x| x >= group.order()) {
            return Err(Error::InvalidGroup(format!("element {bad} out of range")));
        }
        let q = FiniteQuotient {
            group,
            images,
            generator_labels: pres.generators.clone(),
        };
        for r in &pres.relators {
            if q.evaluate(r)? != 0 {
                return Err(Error::NotAHomomorphism(format!(
                    "relator `{}` does not map to the identity",
                    pres.render_word(r)
                )));
            }
        }
        Ok(q)
    }

    /// The trivial quotient (index 1).
    pub fn trivial(pres: &Presentation) -> Self {
        FiniteQuotient {
            group: FiniteGroup::cyclic(1),
            images: vec![0; pres.rank()],
            generator_labels: pres.generators.clone(),
        }
    }

    pub fn target_order(&self) -> usize {
        self.group.order()
    }

    pub fn image_of_letter(&self, letter: i32) -> Result<usize> {
        let g = letter.unsigned_abs() as usize;
        if g == 0 || g > self.images.len() {
            return Err(Error::UnknownGenerator(format!("index {letter}")));
        }
        let x = self.images[g - 1];
        Ok(if letter < 0 { self.group.inv(x) } else { x })
    }

    pub fn evaluate(&self, w: &Word) -> Result<usize> {
        w.0.iter().try_fold(0usize, |acc, &l| {
            Ok(self.group.mul(acc, self.image_of_letter(l)?))
        })
    }

    pub fn image_subgroup(&self) -> Vec<usize> {
        self.group.generated_subgroup(&self.images)
    }

    pub fn is_surjective(&self) -> bool {
        self.image_subgroup().len() == self.target_order()
    }
}

/// `π₁(S_g) -> H₁(S_g; Z/2)`, sending `aᵢ, bᵢ` to the basis bitmasks
/// `1 << 2(i-1)` and `1 << (2i-1)`.
pub fn mod2_homology_cover(genus: usize) -> FiniteQuotient {
    let pres = SurfacePresentation::closed(genus);
    let images = (0..2 * genus).map(|k| 1usize << k).collect();
    FiniteQuotient::new(
        &pres.presentation,
        FiniteGroup::elementary_abelian_2(2 * genus),
        images,
    )
    .expect("surface relator vanishes in homology")
}

/// Whether `word` lies in the kernel of the quotient map.
pub fn kernel_membership(word: &Word, quotient: &FiniteQuotient) -> Result<bool> {
    Ok(quotient.evaluate(word)? == 0)
}

/// A free generator `t·x·rep(tx)⁻¹` of the subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchreierGenerator {
    pub coset: usize,
    pub generator: usize,
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupPresentation {
    pub index: usize,
    pub ambient_rank: usize,
    pub transversal: Vec<Word>,
    pub schreier_generators: Vec<SchreierGenerator>,
    /// Words in the Schreier generators (signed, 1-based indices).
    pub rewritten_relators: Vec<Word>,
}

impl SubgroupPresentation {
    pub fn generator_count(&self) -> usize {
        self.schreier_generators.len()
    }

    pub fn relator_count(&self) -> usize {
        self.rewritten_relators.len()
    }

    /// Euler characteristic of the presentation complex, `1 - #gens + #relators`.
    pub fn presentation_euler_characteristic(&self) -> i64 {
        1 - self.generator_count() as i64 + self.relator_count() as i64
    }
}

/// Presentation of the kernel of `quotient`, which must be surjective.
pub fn reidemeister_schreier(
    pres: impl AsRef<Presentation>,
    quotient: &FiniteQuotient,
) -> Result<SubgroupPresentation> {
    let pres = pres.as_ref();
    if quotient.images.len() != pres.rank() {
        return Err(Error::DimensionMismatch(format!(
            "quotient defined on {} generators, presentation has {}",
            quotient.images.len(),
            pres.rank()
        )));
    }
    let image = quotient.image_subgroup();
    if image.len() != quotient.target_order() {
        return Err(Error::NotSurjective {
            image: image.len(),
            order: quotient.target_order(),
        });
    }
    let group = &quotient.group;
    let index = group.order();
    let rank = pres.rank();
    let act = |coset: usize, letter: i32| -> usize {
        group.mul(coset, quotient.image_of_letter(letter).expect("letter in range"))
    };

    // Shortlex BFS transversal.
    let alphabet: Vec<i32> = (0..rank).flat_map(|g| [signed(g, false), signed(g, true)]).collect();
    let mut rep: Vec<Option<Word>> = vec![None; index];
    let mut order = Vec::with_capacity(index);
    let mut tree = vec![vec![false; rank]; index];
    rep[0] = Some(Word::empty());
    order.push(0usize);
    let mut head = 0;
    while head < order.len() {
        let t = order[head];
        head += 1;
        for &l in &alphabet {
            let c = act(t, l);
            if rep[c].is_some() {
                continue;
            }
            let mut w = rep[t].clone().expect("visited").0;
            w.push(l);
            rep[c] = Some(Word(w));
            order.push(c);
            let g = l.unsigned_abs() as usize - 1;
            if l > 0 {
                tree[t][g] = true;
            } else {
                tree[c][g] = true;
            }
        }
    }

    // Position of each coset in shortlex order.
    let mut position = vec![0usize; index];
    for (i, &c) in order.iter().enumerate() {
        position[c] = i;
    }

    let mut sg_index = vec![vec![None; rank]; index];
    let mut schreier_generators = Vec::new();
    for (pos, &t) in order.iter().enumerate() {
        for g in 0..rank {
            if tree[t][g] {
                continue;
            }
            let target = act(t, signed(g, false));
            let word = rep[t]
                .as_ref()
                .expect("visited")
                .concat(&Word::letter(g, false))
                .concat(&rep[target].as_ref().expect("visited").inverse());
            sg_index[t][g] = Some(schreier_generators.len());
            schreier_generators.push(SchreierGenerator {
                coset: pos,
                generator: g,
                word,
            });
        }
    }

    let mut rewritten_relators = Vec::with_capacity(pres.relators.len() * index);
    for r in &pres.relators {
        for &t in &order {
            let mut cur = t;
            let mut out = Vec::new();
            for &l in &r.0 {
                let g = l.unsigned_abs() as usize - 1;
                if l > 0 {
                    if let Some(k) = sg_index[cur][g] {
                        out.push(k as i32 + 1);
                    }
                    cur = act(cur, l);
                } else {
                    let prev = act(cur, l);
                    if let Some(k) = sg_index[prev][g] {
                        out.push(-(k as i32 + 1));
                    }
                    cur = prev;
                }
            }
            debug_assert_eq!(cur, t, "relator must lie in the kernel");
            rewritten_relators.push(Word(out).reduced());
        }
    }

    Ok(SubgroupPresentation {
        index,
        ambient_rank: rank,
        transversal: order.iter().map(|&c| rep[c].clone().expect("visited")).collect(),
        schreier_generators,
        rewritten_relators,
    })
}

/// Rank of the abelianization, `#generators - rank(relator exponent matrix)`.
pub fn abelianized_rank(sub: &SubgroupPresentation) -> usize {
    let n = sub.generator_count();
    let rows: Vec<Vec<Rational>> = sub
        .rewritten_relators
        .iter()
        .map(|r| r.exponent_sums(n).into_iter().map(exactq::q).collect())
        .filter(|row: &Vec<Rational>| !exactq::is_zero_vec(row))
        .collect();
    n - exactq::rank_of_rows(n, rows)
}

impl fmt::Display for SubgroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "index {} subgroup: {} Schreier generators, {} relators",
            self.index,
            self.generator_count(),
            self.relator_count()
        )
    }
}
