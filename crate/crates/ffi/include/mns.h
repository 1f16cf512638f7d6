#ifndef MNS_H
#define MNS_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum MnsStatus {
  MNS_STATUS_OK = 0,
  MNS_STATUS_NULL_POINTER = 1,
  MNS_STATUS_INVALID_ARGUMENT = 2,
  MNS_STATUS_DOMAIN = 3,
  MNS_STATUS_RESOURCE_LIMIT = 4,
  MNS_STATUS_CAP_EXCEEDED = 5,
  MNS_STATUS_PARSE = 6,
  MNS_STATUS_NUMERICAL = 7,
  MNS_STATUS_IO = 8,
  MNS_STATUS_PANIC = 9,
} MnsStatus;

typedef enum MnsInputKind {
  MNS_INPUT_KIND_SINGLE_PHOTON = 0,
  MNS_INPUT_KIND_FOCK = 1,
  MNS_INPUT_KIND_EVEN_CAT = 2,
  MNS_INPUT_KIND_ODD_CAT = 3,
} MnsInputKind;

typedef enum MnsCircuitKind {
  MNS_CIRCUIT_KIND_BRICKWALL = 0,
  MNS_CIRCUIT_KIND_WORST_CASE = 1,
  MNS_CIRCUIT_KIND_USTC = 2,
} MnsCircuitKind;

typedef enum MnsNoiseModel {
  MNS_NOISE_MODEL_DEPHASING = 0,
  MNS_NOISE_MODEL_DEPOLARIZING = 1,
} MnsNoiseModel;

/**
 * Opaque matrix-product state.
 */
typedef struct MnsMps MnsMps;

/**
 * Bond-dimension estimate. After `MNS_STATUS_CAP_EXCEEDED` only
 * `chi_required` is set, to a lower bound on the true value.
 */
typedef struct MnsBondEstimate {
  uint64_t chi_required;
  double retained_weight;
  double threshold_log;
  double memory_bytes;
  uint64_t pruned_branches;
} MnsBondEstimate;

/**
 * Lossy boson-sampling run. Zero `modes` means 2·photons (ignored for
 * `Ustc`), zero `depth` means 4·modes, zero `max_chi` means unbounded.
 */
typedef struct MnsBsConfig {
  enum MnsInputKind input;
  enum MnsCircuitKind circuit;
  size_t modes;
  size_t photons;
  double eta;
  size_t fock_n;
  double gamma;
  size_t depth;
  uint64_t circuit_seed;
  size_t max_chi;
  uint64_t shots;
  uint64_t seed;
} MnsBsConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * `8 χ² M d` bytes.
 */
double mns_memory_estimate(uint64_t chi, size_t modes, size_t local_dim);

/**
 * Summed per-mode Rényi-α entropy of lossy single photons. `thetas` holds
 * `n` mixing angles, or is null for the worst case θ = π/4.
 *
 * # Safety
 * `thetas` must be null or hold `n` doubles; `out` must be writable.
 */
enum MnsStatus mns_ere_single_photon(size_t n,
                                     double eta,
                                     double alpha,
                                     const double *thetas,
                                     double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum MnsStatus mns_iqp_ere_bound(size_t n, double p_d, double alpha, double *out);

/**
 * Smallest χ keeping `1 − epsilon` of the product spectrum. Site `j` has
 * `lengths[j]` eigenvalues, stored back to back in `eigenvalues`.
 *
 * # Safety
 * `lengths` must hold `sites` values, `eigenvalues` their sum, and `out`
 * must be writable.
 */
enum MnsStatus mns_required_bond_dimension(const double *eigenvalues,
                                           const size_t *lengths,
                                           size_t sites,
                                           double epsilon,
                                           uint64_t cap,
                                           struct MnsBondEstimate *out);

/**
 * Permanent of a dim×dim matrix (row-major, interleaved).
 *
 * # Safety
 * `matrix` must hold `2·dim²` doubles; `re` and `im` must be writable.
 */
enum MnsStatus mns_permanent(const double *matrix, size_t dim, double *re, double *im);

/**
 * Haar-random dim×dim unitary into `out` (row-major, interleaved).
 *
 * # Safety
 * `out` must hold `2·dim²` writable doubles.
 */
enum MnsStatus mns_haar_unitary(size_t dim, uint64_t seed, double *out);

/**
 * Product state of `sites` local states. `dims[i]` is the dimension of
 * site i; `amplitudes` holds all local states back to back as interleaved
 * (re, im) pairs. `max_chi = 0` leaves bonds untruncated.
 *
 * # Safety
 * `dims` must hold `sites` values and `amplitudes` `2·Σ dims` doubles;
 * `out` must be writable.
 */
enum MnsStatus mns_mps_new_product(const size_t *dims,
                                   size_t sites,
                                   const double *amplitudes,
                                   size_t max_chi,
                                   struct MnsMps **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `mps` must be null or a live handle, not used afterwards.
 */
void mns_mps_free(struct MnsMps *mps);

/**
 * # Safety
 * `mps` must be a live handle and `out` writable.
 */
enum MnsStatus mns_mps_site_count(const struct MnsMps *mps, size_t *out);

/**
 * Applies a d×d matrix (row-major, interleaved) on `site`.
 *
 * # Safety
 * `mps` must be a live handle and `matrix` hold `2·d²` doubles.
 */
enum MnsStatus mns_mps_apply_single(struct MnsMps *mps, size_t site, const double *matrix);

/**
 * Applies a (d_a·d_b)² matrix with basis index `s_a·d_b + s_b` on two
 * distinct sites, adjacent or not.
 *
 * # Safety
 * `mps` must be a live handle and `matrix` hold `2·(d_a·d_b)²` doubles.
 */
enum MnsStatus mns_mps_apply_two(struct MnsMps *mps,
                                 size_t site_a,
                                 size_t site_b,
                                 const double *matrix);

/**
 * Rényi-α entropy (nats) across `bond`, between sites `bond` and `bond + 1`.
 *
 * # Safety
 * `mps` must be a live handle and `out` writable.
 */
enum MnsStatus mns_mps_bond_entropy(const struct MnsMps *mps,
                                    size_t bond,
                                    double alpha,
                                    double *out);

/**
 * # Safety
 * `mps` must be a live handle and `out` writable.
 */
enum MnsStatus mns_mps_discarded_weight(const struct MnsMps *mps, double *out);

/**
 * # Safety
 * `mps` must be a live handle and `out` writable.
 */
enum MnsStatus mns_mps_max_bond_dim(const struct MnsMps *mps, size_t *out);

/**
 * Draws one computational-basis outcome into `outcome[0..len]`; `len`
 * must equal the site count.
 *
 * # Safety
 * `mps` must be a live handle and `outcome` hold `len` writable values.
 */
enum MnsStatus mns_mps_sample(const struct MnsMps *mps, uint64_t seed, size_t *outcome, size_t len);

/**
 * Runs the photonic pipeline and writes one JSON record per shot to `path`.
 *
 * # Safety
 * `config` must point to a valid config and `path` to a nul-terminated
 * string.
 */
enum MnsStatus mns_bs_sample_jsonl(const struct MnsBsConfig *config, const char *path);

/**
 * Runs the noisy IQP pipeline on a circuit in text form (one layer per
 * line) and writes JSONL to `path`. `qubits = 0` infers the register.
 *
 * # Safety
 * `circuit_text` and `path` must be nul-terminated strings.
 */
enum MnsStatus mns_iqp_sample_jsonl(const char *circuit_text,
                                    size_t qubits,
                                    enum MnsNoiseModel noise,
                                    double rate,
                                    bool extra_noise_layer,
                                    size_t max_chi,
                                    uint64_t shots,
                                    uint64_t seed,
                                    const char *path);

/**
 * Message of the last failed call on this thread, or null after a
 * successful one. Valid until the next call on the same thread.
 */
const char *mns_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MNS_H */
