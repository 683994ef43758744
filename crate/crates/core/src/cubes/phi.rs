use std::fmt;

use crate::boxprod::{BoxError, BoxGenerator, BoxWord, ColourAlgebra};
use crate::operad::{Color, Generator, OperadTree, Permutation};

use super::{cube_act, cube_compose, CubeConfig, CubeError, LittleCube};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `cᵢ × I^pad` on the left, `I^pad × cᵢ` on the right.
pub fn phi_embed(c: &CubeConfig, side: Side, pad: usize) -> CubeConfig {
    let filler = LittleCube::unit(pad);
    let cubes = c
        .cubes()
        .iter()
        .map(|x| match side {
            Side::Left => x.product(&filler),
            Side::Right => filler.product(x),
        })
        .collect();
    CubeConfig::new(c.dim() + pad, cubes, crate::cubes::Strictness::Plain)
        .expect("padding preserves disjoint interiors")
}

/// A cube configuration used as a generator of one colour of a box word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CubeGen {
    pub color: Color,
    pub config: CubeConfig,
}

impl CubeGen {
    pub fn left(config: CubeConfig) -> Self {
        CubeGen {
            color: Color::Left,
            config,
        }
    }

    pub fn right(config: CubeConfig) -> Self {
        CubeGen {
            color: Color::Right,
            config,
        }
    }
}

impl Generator for CubeGen {
    fn arity(&self) -> usize {
        self.config.len()
    }
}

impl BoxGenerator for CubeGen {
    fn color(&self) -> Color {
        self.color
    }
}

impl fmt::Display for CubeGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.color {
            Color::Left => "L",
            Color::Right => "R",
            Color::Single => "S",
        };
        write!(f, "{tag}:{}", self.config)
    }
}

/// The little-cubes operads `C_k` (left) and `C_ℓ` (right).
#[derive(Clone, Copy, Debug)]
pub struct CubeColours {
    pub k: usize,
    pub l: usize,
}

impl CubeColours {
    pub fn new(k: usize, l: usize) -> Self {
        CubeColours { k, l }
    }

    fn dim(&self, color: Color) -> Result<usize, BoxError> {
        match color {
            Color::Left => Ok(self.k),
            Color::Right => Ok(self.l),
            Color::Single => Err(BoxError::Uncoloured("cube generator".into())),
        }
    }

    fn check(&self, g: &CubeGen) -> Result<(), BoxError> {
        let d = self.dim(g.color)?;
        if g.config.dim() != d {
            return Err(BoxError::NotComposable(format!(
                "{g} has dimension {}, colour expects {d}",
                g.config.dim()
            )));
        }
        Ok(())
    }
}

impl ColourAlgebra<CubeGen> for CubeColours {
    fn compose(&self, outer: &CubeGen, inners: &[Option<CubeGen>]) -> Result<CubeGen, BoxError> {
        self.check(outer)?;
        let d = outer.config.dim();
        let mut configs = Vec::with_capacity(inners.len());
        for i in inners {
            match i {
                None => configs.push(CubeConfig::unit(d)),
                Some(g) if g.color == outer.color => {
                    self.check(g)?;
                    configs.push(g.config.clone());
                }
                Some(g) => {
                    return Err(BoxError::NotComposable(format!(
                        "{g} and {outer} have different colours"
                    )))
                }
            }
        }
        let config = cube_compose(&outer.config, &configs)
            .map_err(|e| BoxError::NotComposable(e.to_string()))?;
        Ok(CubeGen {
            color: outer.color,
            config,
        })
    }

    fn is_unit(&self, g: &CubeGen) -> bool {
        g.config.is_unit()
    }

    fn unit(&self, color: Color) -> Option<CubeGen> {
        let d = self.dim(color).ok()?;
        Some(CubeGen {
            color,
            config: CubeConfig::unit(d),
        })
    }

    fn act(&self, g: &CubeGen, sigma: &Permutation) -> Result<CubeGen, BoxError> {
        let config = cube_act(&g.config, sigma).map_err(|e| BoxError::NotComposable(e.to_string()))?;
        Ok(CubeGen {
            color: g.color,
            config,
        })
    }

    fn nullaries(&self, color: Color) -> Vec<CubeGen> {
        match self.dim(color) {
            Ok(d) => vec![CubeGen {
                color,
                config: CubeConfig::empty(d),
            }],
            Err(_) => Vec::new(),
        }
    }
}

/// Evaluates a word in `C_k □ C_ℓ` to a configuration in `C_{k+ℓ}`: input `s`
/// lands in the composite of the embedded cubes along the path to leaf `s`.
pub fn phi_eval(w: &BoxWord<CubeGen>, k: usize, l: usize) -> Result<CubeConfig, CubeError> {
    let mut slots: Vec<Option<LittleCube>> = vec![None; w.arity()];
    descend(w.tree(), &LittleCube::unit(k + l), k, l, &mut slots)?;
    let cubes = slots
        .into_iter()
        .map(|c| c.ok_or_else(|| CubeError::MalformedWord("leaf labels".into())))
        .collect::<Result<Vec<_>, _>>()?;
    CubeConfig::plain(k + l, cubes)
}

fn descend(
    t: &OperadTree<CubeGen>,
    current: &LittleCube,
    k: usize,
    l: usize,
    slots: &mut [Option<LittleCube>],
) -> Result<(), CubeError> {
    match t {
        OperadTree::Leaf(s) => {
            let slot = slots
                .get_mut(s - 1)
                .ok_or_else(|| CubeError::MalformedWord(format!("leaf {s}")))?;
            *slot = Some(current.clone());
            Ok(())
        }
        OperadTree::Node { op, children } => {
            let (side, dim, pad) = match op.color {
                Color::Left => (Side::Left, k, l),
                Color::Right => (Side::Right, l, k),
                Color::Single => return Err(CubeError::MalformedWord(op.to_string())),
            };
            if op.config.dim() != dim {
                return Err(CubeError::DimensionMismatch {
                    expected: dim,
                    found: op.config.dim(),
                });
            }
            if children.len() != op.config.len() {
                return Err(CubeError::MalformedWord(format!("{op} has {} children", children.len())));
            }
            let embedded = phi_embed(&op.config, side, pad);
            for (c, child) in embedded.cubes().iter().zip(children) {
                descend(child, &current.compose(c), k, l, slots)?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxprod::Rewriter;

    fn c1(a: (i64, i64), b: (i64, i64)) -> LittleCube {
        LittleCube::from_fractions(&[(a, b)])
    }

    #[test]
    fn embed_pads() {
        let c = CubeConfig::plain(1, vec![c1((0, 1), (1, 2))]).unwrap();
        let e = phi_embed(&c, Side::Left, 1);
        assert_eq!(e.cubes()[0].to_string(), "[0,1/2]x[0,1]");
        let r = phi_embed(&c, Side::Right, 1);
        assert_eq!(r.cubes()[0].to_string(), "[0,1]x[0,1/2]");
        assert_eq!(phi_embed(&c, Side::Left, 0), c);
    }

    #[test]
    fn relation_sides_agree() {
        let alpha = CubeConfig::plain(1, vec![c1((0, 1), (1, 3)), c1((1, 2), (1, 1))]).unwrap();
        let beta = CubeConfig::plain(1, vec![c1((1, 4), (1, 2)), c1((3, 4), (1, 1))]).unwrap();
        let a = CubeGen::left(alpha);
        let b = CubeGen::right(beta);
        let lhs = OperadTree::Node {
            op: a.clone(),
            children: vec![
                OperadTree::Node {
                    op: b.clone(),
                    children: vec![OperadTree::Leaf(1), OperadTree::Leaf(2)],
                },
                OperadTree::Node {
                    op: b,
                    children: vec![OperadTree::Leaf(3), OperadTree::Leaf(4)],
                },
            ],
        };
        let lhs = BoxWord::new(lhs).unwrap();
        let colours = CubeColours::new(1, 1);
        let rhs = Rewriter::new(&colours).apply_interchange(&lhs, &[]).unwrap();
        assert_eq!(phi_eval(&lhs, 1, 1).unwrap(), phi_eval(&rhs, 1, 1).unwrap());
        assert_eq!(phi_eval(&lhs, 1, 1).unwrap().len(), 4);
    }

    #[test]
    fn single_generator_is_padding() {
        let alpha = CubeConfig::plain(1, vec![c1((0, 1), (1, 2))]).unwrap();
        let w = BoxWord::new(OperadTree::corolla(CubeGen::left(alpha.clone()))).unwrap();
        assert_eq!(phi_eval(&w, 1, 2).unwrap(), phi_embed(&alpha, Side::Left, 2));
    }
}
