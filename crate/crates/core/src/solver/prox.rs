// Copyright 2026 The mintime Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use nalgebra::DVector;

use crate::sets::norm2;

/// Proximal operator of `lambda·‖·‖₂`: shrinks `v` towards the origin by
/// `lambda` and returns zero once `‖v‖₂ <= lambda`.
pub fn block_soft_threshold(v: &DVector<f64>, lambda: f64) -> DVector<f64> {
    let mut out = v.clone();
    block_soft_threshold_in_place(out.as_mut_slice(), lambda);
    out
}

pub(crate) fn block_soft_threshold_in_place(v: &mut [f64], lambda: f64) {
    if lambda <= 0.0 {
        return;
    }
    let norm = norm2(v);
    if norm <= lambda {
        v.iter_mut().for_each(|c| *c = 0.0);
    } else {
        let scale = 1.0 - lambda / norm;
        v.iter_mut().for_each(|c| *c *= scale);
    }
}
