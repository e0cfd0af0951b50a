//! Finite regular covers `E` of a product `B × F` of closed surfaces.
//!
//! A cover is given by a surjection `q: π₁(B) × π₁(F) → G` onto a finite
//! group, with `π₁(E) = ker q`. The product is presented with base
//! generators `a1 b1 …`, fiber generators `x1 y1 …`, both surface relators
//! and every commutator `[s, t]` of a base generator with a fiber generator.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::certificate::{CheckStatus, Conclusion, FiberingCertificate};
use crate::error::{Error, Result};
use crate::prodring::{two_fibering_certificate, FiberingDecomposition};
use crate::surfgroup::{
    abelianized_rank, euler_characteristic, reidemeister_schreier, FiniteGroup, FiniteQuotient,
    Presentation, SurfacePresentation, Word,
};

pub const H4_AXIOM: &str =
    "the covering E -> Im(p1) x Im(p2) induces an isomorphism on H^4(-; Q) (both are closed oriented 4-manifolds; Poincaré duality), so H^2 of the product injects into H^2(E; Q)";

pub const STATEMENT_PROOF_NOTE: &str =
    "the source theorem states a fibering number of one while its argument establishes two; this certificate claims only that E has no fibering other than the two projections";

/// `π₁(S_{g_B}) × π₁(S_{g_F})` as a finitely presented group.
pub fn product_presentation(genus_b: usize, genus_f: usize) -> Presentation {
    let base = SurfacePresentation::closed(genus_b).presentation;
    let fiber = SurfacePresentation::closed(genus_f).presentation;
    let nb = base.rank();
    let mut generators = base.generators.clone();
    for j in 1..=genus_f {
        generators.push(format!("x{j}"));
        generators.push(format!("y{j}"));
    }
    let shift = |w: &Word| Word(w.0.iter().map(|&l| l + l.signum() * nb as i32).collect());
    let mut relators: Vec<Word> = base.relators.clone();
    relators.extend(fiber.relators.iter().map(shift));
    for s in 0..nb {
        for t in 0..fiber.rank() {
            let s = s as i32 + 1;
            let t = (nb + t) as i32 + 1;
            relators.push(Word(vec![s, t, -s, -t]));
        }
    }
    Presentation { generators, relators }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductCoverSpec {
    pub genus_b: usize,
    pub genus_f: usize,
    pub quotient: FiniteQuotient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRef {
    Index(usize),
    /// Binary string, most significant bit first.
    Bits(String),
}

/// On-disk form of a cover spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSpecFile {
    #[serde(rename = "genusB")]
    pub genus_b: usize,
    #[serde(rename = "genusF")]
    pub genus_f: usize,
    pub group: String,
    #[serde(default)]
    pub rank: Option<usize>,
    #[serde(default)]
    pub table: Option<Vec<Vec<usize>>>,
    /// Generators not listed map to the identity.
    pub images: BTreeMap<String, ElementRef>,
    #[serde(default)]
    pub name: Option<String>,
}

fn element_index(e: &ElementRef) -> Result<usize> {
    match e {
        ElementRef::Index(i) => Ok(*i),
        ElementRef::Bits(s) => {
            if s.is_empty() || !s.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::MalformedCover(format!("`{s}` is not a bit string")));
            }
            usize::from_str_radix(s, 2).map_err(|e| Error::MalformedCover(e.to_string()))
        }
    }
}

impl ProductCoverSpec {
    pub fn new(genus_b: usize, genus_f: usize, group: FiniteGroup, images: Vec<usize>) -> Result<Self> {
        if genus_b < 2 || genus_f < 2 {
            return Err(Error::Precondition(format!(
                "both genera must be at least 2, got ({genus_b}, {genus_f})"
            )));
        }
        let pres = product_presentation(genus_b, genus_f);
        let quotient = FiniteQuotient::new(&pres, group, images)?;
        if !quotient.is_surjective() {
            return Err(Error::NotSurjective {
                image: quotient.image_subgroup().len(),
                order: quotient.target_order(),
            });
        }
        Ok(ProductCoverSpec { genus_b, genus_f, quotient })
    }

    pub fn from_file(file: &CoverSpecFile) -> Result<Self> {
        let group = match file.group.as_str() {
            "table" => {
                let table = file
                    .table
                    .clone()
                    .ok_or_else(|| Error::MalformedCover("group \"table\" needs a `table`".into()))?;
                FiniteGroup::from_table(table)?
            }
            "elementary-abelian-2" => {
                let rank = match file.rank {
                    Some(r) => r,
                    None => file
                        .images
                        .values()
                        .map(|e| match e {
                            ElementRef::Bits(s) => s.len(),
                            ElementRef::Index(i) => (usize::BITS - i.leading_zeros()) as usize,
                        })
                        .max()
                        .unwrap_or(0),
                };
                if rank > 16 {
                    return Err(Error::MalformedCover(format!("rank {rank} is too large")));
                }
                FiniteGroup::elementary_abelian_2(rank)
            }
            other => {
                return Err(Error::MalformedCover(format!("unknown group kind `{other}`")));
            }
        };
        let pres = product_presentation(file.genus_b, file.genus_f);
        let mut images = vec![0; pres.rank()];
        for (label, e) in &file.images {
            let g = pres
                .generator_index(label)
                .ok_or_else(|| Error::UnknownGenerator(label.clone()))?;
            images[g] = element_index(e)?;
        }
        ProductCoverSpec::new(file.genus_b, file.genus_f, group, images)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let file: CoverSpecFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        ProductCoverSpec::from_file(&file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        ProductCoverSpec::parse_json(&text)
    }

    pub fn index(&self) -> usize {
        self.quotient.target_order()
    }

    pub fn presentation(&self) -> Presentation {
        product_presentation(self.genus_b, self.genus_f)
    }

    fn factor_ranks(&self) -> (usize, usize) {
        (2 * self.genus_b, 2 * self.genus_f)
    }

    /// `π₁(factor) → G/q(other factor)`; its kernel is the projection of `π₁(E)`.
    fn projected_quotient(&self, first: bool) -> Result<FiniteQuotient> {
        let (nb, nf) = self.factor_ranks();
        let images = &self.quotient.images;
        let (own, other) = if first {
            (&images[..nb], &images[nb..nb + nf])
        } else {
            (&images[nb..nb + nf], &images[..nb])
        };
        let group = &self.quotient.group;
        let normal = group.generated_subgroup(other);
        let (quot, proj) = group.quotient(&normal)?;
        let genus = if first { self.genus_b } else { self.genus_f };
        let pres = SurfacePresentation::closed(genus).presentation;
        FiniteQuotient::new(&pres, quot, own.iter().map(|&x| proj[x]).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverH1Data {
    pub index: usize,
    pub index_im1: usize,
    pub index_im2: usize,
    pub b1_im1: usize,
    pub b1_im2: usize,
    pub b1_total: usize,
}

impl CoverH1Data {
    pub fn triple(&self) -> (usize, usize, usize) {
        (self.b1_im1, self.b1_im2, self.b1_total)
    }

    pub fn decomposes(&self) -> bool {
        self.b1_total == self.b1_im1 + self.b1_im2
    }
}

fn kernel_b1(pres: &Presentation, quotient: &FiniteQuotient) -> Result<usize> {
    Ok(abelianized_rank(&reidemeister_schreier(pres, quotient)?))
}

/// `b₁` of `Im p₁`, `Im p₂` and `E`, the last computed directly on the product.
pub fn cover_h1_data(spec: &ProductCoverSpec) -> Result<CoverH1Data> {
    let q1 = spec.projected_quotient(true)?;
    let q2 = spec.projected_quotient(false)?;
    let b1_im1 = kernel_b1(&SurfacePresentation::closed(spec.genus_b).presentation, &q1)?;
    let b1_im2 = kernel_b1(&SurfacePresentation::closed(spec.genus_f).presentation, &q2)?;
    let b1_total = kernel_b1(&spec.presentation(), &spec.quotient)?;
    Ok(CoverH1Data {
        index: spec.index(),
        index_im1: q1.target_order(),
        index_im2: q2.target_order(),
        b1_im1,
        b1_im2,
        b1_total,
    })
}

pub fn cover_certificate(spec: &ProductCoverSpec) -> Result<FiberingCertificate> {
    let data = cover_h1_data(spec)?;
    let mut cert = FiberingCertificate::new(format!(
        "index-{} regular cover E of S_{} x S_{}",
        data.index, spec.genus_b, spec.genus_f
    ));
    cert.dim("index", data.index as u64);
    cert.dim("b1_im1", data.b1_im1 as u64);
    cert.dim("b1_im2", data.b1_im2 as u64);
    cert.dim("b1_total", data.b1_total as u64);

    cert.check(
        "h1_decomposition",
        data.decomposes(),
        json!({ "b1_im1": data.b1_im1, "b1_im2": data.b1_im2, "b1_direct": data.b1_total }),
    );

    // χ(Im pᵢ) = [π₁ : Im pᵢ]·χ(factor), and Im p₁ × Im p₂ ⊇ π₁(E) with finite index.
    let chi_b = euler_characteristic(spec.genus_b, 0);
    let chi_f = euler_characteristic(spec.genus_f, 0);
    let chi_im1 = 2 - data.b1_im1 as i64;
    let chi_im2 = 2 - data.b1_im2 as i64;
    let outer = data.index_im1 * data.index_im2;
    let chi_ok = chi_im1 == data.index_im1 as i64 * chi_b
        && chi_im2 == data.index_im2 as i64 * chi_f
        && data.index % outer == 0;
    let chi_e = data.index as i64 * chi_b * chi_f;
    cert.check(
        "euler_characteristic",
        chi_ok && chi_e == (data.index / outer.max(1)) as i64 * chi_im1 * chi_im2,
        json!({
            "chi_E": chi_e,
            "chi_im1": chi_im1,
            "chi_im2": chi_im2,
            "index_in_product_of_images": data.index / outer.max(1),
        }),
    );

    cert.axiom(H4_AXIOM);
    if data.b1_im1 >= 4 && data.b1_im2 >= 4 {
        let inner = two_fibering_certificate(
            FiberingDecomposition { b1_first: data.b1_im1, b1_second: data.b1_im2 },
            true,
            true,
        )?;
        for a in inner.axioms {
            cert.axiom(a);
        }
        for c in inner.checks {
            cert.check(format!("two_fibering/{}", c.name), c.status == CheckStatus::Pass, c.data);
        }
    } else {
        cert.check("base_genera_hyperbolic", false, json!({ "b1_im1": data.b1_im1, "b1_im2": data.b1_im2 }));
    }
    cert.conclude(Conclusion {
        fib: None,
        statement: "E admits no fibering other than the two projections to Im(p1) and Im(p2)".into(),
        notes: vec![STATEMENT_PROOF_NOTE.into()],
    });
    Ok(cert)
}
