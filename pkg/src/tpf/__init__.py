"""Text-pass-filter scene text detection, desk scale.

Subpackage map:
    geometry  -- polygon/mask primitives (rasterize, components, contours, IoU)
    labels    -- training-label generation (instance stack, center points,
                 reinforcement matrix, foreground mask)
    sieve     -- feature/filter sampling, relation binarization, filter
                 ensemble, mask decoding, full detect pipeline
    losses    -- focal / dice / feature-filter-pair losses with gradients
    micronet  -- small numpy conv net (encoder + four heads + relation head),
                 hand-written backprop, Adam training loop
    synthgen  -- deterministic synthetic scene/corpus generator
    evalbench -- P/R/F matching metrics, stage timing, ablation sweeps
    cli       -- command-line front end
"""

__version__ = "0.1.0"
