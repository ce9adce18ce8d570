//! Finite complete partite graphs approximating a limit vector.

use num_traits::{ToPrimitive, Zero};

use super::PartiteVector;
use crate::error::Result;
use crate::graph::shape::{CompletePartiteShape, PartiteLayout};
use crate::graph::Graph;
use crate::rational::Rational;

/// Size of the part realising each index `1..=m`, and the clique size.
pub fn realised_sizes(n: usize, x: &PartiteVector) -> (Vec<usize>, usize) {
    let nn = Rational::from_integer(n.into());
    let scaled: Vec<Rational> = x.parts().iter().map(|p| p * &nn).collect();
    let floors: Vec<usize> = scaled.iter().map(|s| s.floor().to_integer().to_usize().unwrap_or(0)).collect();
    if x.x0().is_zero() {
        // Largest remainder; ties go to the lower index.
        let mut sizes = floors.clone();
        let missing = n - floors.iter().sum::<usize>();
        let mut order: Vec<usize> = (0..sizes.len()).collect();
        order.sort_by(|&a, &b| {
            let ra = &scaled[a] - Rational::from_integer(floors[a].into());
            let rb = &scaled[b] - Rational::from_integer(floors[b].into());
            rb.cmp(&ra).then(a.cmp(&b))
        });
        for &i in order.iter().take(missing) {
            sizes[i] += 1;
        }
        (sizes, 0)
    } else {
        let two = Rational::from_integer(2.into());
        let sizes: Vec<usize> = scaled.iter().zip(&floors).map(|(s, &f)| if *s >= two { f } else { 0 }).collect();
        let clique = n - sizes.iter().sum::<usize>();
        (sizes, clique)
    }
}

/// Shape of G_{n,x}.
pub fn realisation(n: usize, x: &PartiteVector) -> CompletePartiteShape {
    let (sizes, clique) = realised_sizes(n, x);
    let mut all: Vec<usize> = sizes.into_iter().filter(|&s| s > 0).collect();
    all.extend(std::iter::repeat_n(1, clique));
    CompletePartiteShape::new(all).expect("positive sizes")
}

/// G_{n,x} with part `i` of the layout realising index `i`; clique vertices come last.
pub fn realisation_layout(n: usize, x: &PartiteVector) -> PartiteLayout {
    let (sizes, clique) = realised_sizes(n, x);
    PartiteLayout::from_sizes(&sizes, clique)
}

pub fn realisation_graph(n: usize, x: &PartiteVector) -> Result<(Graph, PartiteLayout)> {
    let layout = realisation_layout(n, x);
    Ok((layout.graph()?, layout))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn realisations() {
        assert_eq!(realisation(5, &PartiteVector::zero()).sizes(), &[1; 5]);
        assert_eq!(realisation(7, &PartiteVector::uniform(2)).sizes(), &[4, 3]);
        let x = PartiteVector::new(vec![rat(3, 5)]).unwrap();
        assert_eq!(realisation(10, &x).sizes(), &[6, 1, 1, 1, 1]);
        let y = PartiteVector::new(vec![rat(1, 2), rat(1, 20)]).unwrap();
        assert_eq!(realisation_layout(20, &y).parts[1].len(), 0);
        assert_eq!(realisation(20, &y).sizes(), &[10; 1].iter().chain([1; 10].iter()).copied().collect::<Vec<_>>()[..]);
    }
}
