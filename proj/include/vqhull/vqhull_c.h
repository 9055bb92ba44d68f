#ifndef VQHULL_VQHULL_C_H
#define VQHULL_VQHULL_C_H

/* Flat-array C interface for language bindings. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

/*
 * Computes the planar convex hull of the n points (xs[i], ys[i]).
 *
 * On success writes the hull size to *out_count and the input indices of the
 * hull vertices, in clockwise order starting at the leftmost point, to
 * out_indices (which must have room for n entries; *out_count <= n always).
 * Coordinates that appear more than once resolve to the first occurrence.
 *
 * Returns 0 on success, 1 on invalid arguments (null arrays with n > 0,
 * workers < 1, or a non-finite coordinate).
 */
int vqhull_compute(const double* xs, const double* ys, size_t n, int workers,
                   size_t* out_indices, size_t* out_count);

#ifdef __cplusplus
}
#endif

#endif /* VQHULL_VQHULL_C_H */
