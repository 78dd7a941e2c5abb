#include "lca/ops.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

namespace lca {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CMap = Eigen::Map<const RowMat>;
using MMap = Eigen::Map<RowMat>;

using Node = std::shared_ptr<detail::TensorData>;

CMap cmap(const Node& d, std::size_t r, std::size_t c) {
    return CMap(d->values.data(), static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
}

MMap mmap_grad(Node& d, std::size_t r, std::size_t c) {
    return MMap(d->grad.data(), static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
}

// Dead branches (nodes never reached from the loss) still get their input
// gradients allocated as zeros, so "participating but unused" parameters
// report an exact zero gradient instead of a missing one.
void ensure_grad(const Node& d) {
    if (d->requires_grad && d->grad.empty()) d->grad.assign(d->values.size(), 0.0);
}

const std::vector<double>* upstream(const Node& d) {
    return d->grad.empty() ? nullptr : &d->grad;
}

bool track(std::initializer_list<const Tensor*> inputs) {
    if (!autograd::recording()) return false;
    for (const Tensor* t : inputs) {
        if (t->requires_grad()) return true;
    }
    return false;
}

Tensor make_output(Shape shape, std::vector<double> values, bool tracked) {
    Tensor out = Tensor::from_values(std::move(shape), std::move(values), tracked);
    return out;
}

void require_rank2(const Tensor& t, const char* who) {
    if (t.rank() != 2) {
        throw ShapeError(std::string(who) + ": expected rank-2 tensor, got " +
                         shape_str(t.shape()));
    }
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
    require_rank2(a, "matmul");
    require_rank2(b, "matmul");
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: inner dimensions disagree, " + shape_str(a.shape()) + " x " +
                         shape_str(b.shape()));
    }
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    std::vector<double> vals(m * n);
    MMap(vals.data(), m, n).noalias() = cmap(a.data(), m, k) * cmap(b.data(), k, n);

    bool tracked = track({&a, &b});
    Tensor out = make_output({m, n}, std::move(vals), tracked);
    if (tracked) {
        autograd::record([ad = a.data(), bd = b.data(), od = out.data(), m, k, n]() mutable {
            ensure_grad(ad);
            ensure_grad(bd);
            const auto* go = upstream(od);
            if (!go) return;
            CMap g(go->data(), m, n);
            if (ad->requires_grad) mmap_grad(ad, m, k).noalias() += g * cmap(bd, k, n).transpose();
            if (bd->requires_grad) mmap_grad(bd, k, n).noalias() += cmap(ad, m, k).transpose() * g;
        });
    }
    return out;
}

Tensor transpose(const Tensor& a) {
    require_rank2(a, "transpose");
    const std::size_t m = a.rows(), n = a.cols();
    std::vector<double> vals(m * n);
    MMap(vals.data(), n, m) = cmap(a.data(), m, n).transpose();

    bool tracked = track({&a});
    Tensor out = make_output({n, m}, std::move(vals), tracked);
    if (tracked) {
        autograd::record([ad = a.data(), od = out.data(), m, n]() mutable {
            ensure_grad(ad);
            const auto* go = upstream(od);
            if (!go) return;
            mmap_grad(ad, m, n) += CMap(go->data(), n, m).transpose();
        });
    }
    return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
    if (a.shape() != b.shape()) {
        throw ShapeError("add: shapes disagree, " + shape_str(a.shape()) + " vs " +
                         shape_str(b.shape()));
    }
    std::vector<double> vals(a.numel());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = a.values()[i] + b.values()[i];

    bool tracked = track({&a, &b});
    Tensor out = make_output(a.shape(), std::move(vals), tracked);
    if (tracked) {
        autograd::record([ad = a.data(), bd = b.data(), od = out.data()] {
            ensure_grad(ad);
            ensure_grad(bd);
            const auto* go = upstream(od);
            if (!go) return;
            if (ad->requires_grad) {
                for (std::size_t i = 0; i < go->size(); ++i) ad->grad[i] += (*go)[i];
            }
            if (bd->requires_grad) {
                for (std::size_t i = 0; i < go->size(); ++i) bd->grad[i] += (*go)[i];
            }
        });
    }
    return out;
}

Tensor add_rowvec(const Tensor& a, const Tensor& row) {
    require_rank2(a, "add_rowvec");
    if (row.numel() != a.cols()) {
        throw ShapeError("add_rowvec: row vector " + shape_str(row.shape()) +
                         " does not match matrix " + shape_str(a.shape()));
    }
    const std::size_t m = a.rows(), n = a.cols();
    std::vector<double> vals(m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) vals[i * n + j] = a.values()[i * n + j] + row.values()[j];

    bool tracked = track({&a, &row});
    Tensor out = make_output({m, n}, std::move(vals), tracked);
    if (tracked) {
        autograd::record([ad = a.data(), rd = row.data(), od = out.data(), m, n] {
            ensure_grad(ad);
            ensure_grad(rd);
            const auto* go = upstream(od);
            if (!go) return;
            if (ad->requires_grad) {
                for (std::size_t i = 0; i < go->size(); ++i) ad->grad[i] += (*go)[i];
            }
            if (rd->requires_grad) {
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < n; ++j) rd->grad[j] += (*go)[i * n + j];
            }
        });
    }
    return out;
}

Tensor mul(const Tensor& a, const Tensor& b) {
    if (a.shape() != b.shape()) {
        throw ShapeError("mul: shapes disagree, " + shape_str(a.shape()) + " vs " +
                         shape_str(b.shape()));
    }
    std::vector<double> vals(a.numel());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = a.values()[i] * b.values()[i];

    bool tracked = track({&a, &b});
    Tensor out = make_output(a.shape(), std::move(vals), tracked);
    if (tracked) {
        autograd::record([ad = a.data(), bd = b.data(), od = out.data()] {
            ensure_grad(ad);
            ensure_grad(bd);
            const auto* go = upstream(od);
            if (!go) return;
            if (ad->requires_grad) {
                for (std::size_t i = 0; i < go->size(); ++i) ad->grad[i] += (*go)[i] * bd->values[i];
            }
            if (bd->requires_grad) {
                for (std::size_t i = 0; i < go->size(); ++i) bd->grad[i] += (*go)[i] * ad->values[i];
            }
        });
    }
    return out;
}

Tensor scale(const Tensor& a, double factor) {
    std::vector<double> vals(a.numel());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = a.values()[i] * factor;

    bool tracked = track({&a});
    Tensor out = make_output(a.shape(), std::move(vals), tracked);
    if (tracked) {
        autograd::record([ad = a.data(), od = out.data(), factor] {
            ensure_grad(ad);
            const auto* go = upstream(od);
            if (!go) return;
            for (std::size_t i = 0; i < go->size(); ++i) ad->grad[i] += (*go)[i] * factor;
        });
    }
    return out;
}

Tensor tanh_op(const Tensor& a) {
    std::vector<double> vals(a.numel());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = std::tanh(a.values()[i]);

    bool tracked = track({&a});
    Tensor out = make_output(a.shape(), std::move(vals), tracked);
    if (tracked) {
        autograd::record([ad = a.data(), od = out.data()] {
            ensure_grad(ad);
            const auto* go = upstream(od);
            if (!go) return;
            for (std::size_t i = 0; i < go->size(); ++i) {
                double y = od->values[i];
                ad->grad[i] += (*go)[i] * (1.0 - y * y);
            }
        });
    }
    return out;
}

Tensor sum(const Tensor& a) {
    double total = 0.0;
    for (double v : a.values()) total += v;

    bool tracked = track({&a});
    Tensor out = make_output({1}, {total}, tracked);
    if (tracked) {
        autograd::record([ad = a.data(), od = out.data()] {
            ensure_grad(ad);
            const auto* go = upstream(od);
            if (!go) return;
            double g = (*go)[0];
            for (double& v : ad->grad) v += g;
        });
    }
    return out;
}

namespace {

// Shared softmax backward over contiguous slices: gx = p * (go - sum(go * p)).
void softmax_backward_slices(const std::vector<double>& probs, const std::vector<double>& go,
                             std::vector<double>& gx, std::size_t slice, std::size_t width) {
    for (std::size_t s = 0; s < probs.size(); s += slice) {
        double dot = 0.0;
        for (std::size_t j = 0; j < width; ++j) dot += go[s + j] * probs[s + j];
        for (std::size_t j = 0; j < width; ++j) gx[s + j] += probs[s + j] * (go[s + j] - dot);
    }
}

}  // namespace

Tensor softmax(const Tensor& a) {
    const std::size_t n = a.shape().back();
    if (n == 0) throw ShapeError("softmax: empty last axis in " + shape_str(a.shape()));
    std::vector<double> vals(a.numel());
    for (std::size_t s = 0; s < vals.size(); s += n) {
        double m = a.values()[s];
        for (std::size_t j = 1; j < n; ++j) m = std::max(m, a.values()[s + j]);
        double denom = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            vals[s + j] = std::exp(a.values()[s + j] - m);
            denom += vals[s + j];
        }
        for (std::size_t j = 0; j < n; ++j) vals[s + j] /= denom;
    }

    bool tracked = track({&a});
    Tensor out = make_output(a.shape(), std::move(vals), tracked);
    if (tracked) {
        autograd::record([ad = a.data(), od = out.data(), n] {
            ensure_grad(ad);
            const auto* go = upstream(od);
            if (!go) return;
            softmax_backward_slices(od->values, *go, ad->grad, n, n);
        });
    }
    return out;
}

Tensor masked_softmax(const Tensor& a, std::size_t valid_cols) {
    require_rank2(a, "masked_softmax");
    const std::size_t m = a.rows(), n = a.cols();
    const std::size_t valid = std::min(valid_cols, n);
    if (valid == 0) throw ShapeError("masked_softmax: no valid columns");
    std::vector<double> vals(m * n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = a.values().data() + i * n;
        double mx = row[0];
        for (std::size_t j = 1; j < valid; ++j) mx = std::max(mx, row[j]);
        double denom = 0.0;
        for (std::size_t j = 0; j < valid; ++j) {
            vals[i * n + j] = std::exp(row[j] - mx);
            denom += vals[i * n + j];
        }
        for (std::size_t j = 0; j < valid; ++j) vals[i * n + j] /= denom;
    }

    bool tracked = track({&a});
    Tensor out = make_output({m, n}, std::move(vals), tracked);
    if (tracked) {
        autograd::record([ad = a.data(), od = out.data(), m, n, valid] {
            ensure_grad(ad);
            const auto* go = upstream(od);
            if (!go) return;
            for (std::size_t i = 0; i < m; ++i) {
                double dot = 0.0;
                for (std::size_t j = 0; j < valid; ++j)
                    dot += (*go)[i * n + j] * od->values[i * n + j];
                for (std::size_t j = 0; j < valid; ++j) {
                    ad->grad[i * n + j] += od->values[i * n + j] * ((*go)[i * n + j] - dot);
                }
            }
        });
    }
    return out;
}

Tensor scaled_dot_attention(const Tensor& q, const Tensor& k, const Tensor& v,
                            std::size_t valid_keys, std::vector<double>* save_attn) {
    require_rank2(q, "scaled_dot_attention");
    require_rank2(k, "scaled_dot_attention");
    require_rank2(v, "scaled_dot_attention");
    if (q.cols() == 0) throw ShapeError("scaled_dot_attention: d_k is zero");
    if (q.cols() != k.cols()) {
        throw ShapeError("scaled_dot_attention: q " + shape_str(q.shape()) + " and k " +
                         shape_str(k.shape()) + " disagree on d_k");
    }
    if (k.rows() != v.rows()) {
        throw ShapeError("scaled_dot_attention: k " + shape_str(k.shape()) + " and v " +
                         shape_str(v.shape()) + " disagree on key count");
    }
    const std::size_t nq = q.rows(), nk = k.rows(), dk = q.cols(), dv = v.cols();
    const std::size_t valid = std::min(valid_keys, nk);
    if (valid == 0) throw ShapeError("scaled_dot_attention: no valid keys");
    const double inv_scale = 1.0 / std::sqrt(static_cast<double>(dk));

    // scores, then row-wise masked softmax into attn
    auto attn = std::make_shared<std::vector<double>>(nq * nk, 0.0);
    {
        RowMat scores = cmap(q.data(), nq, dk) * cmap(k.data(), nk, dk).transpose() * inv_scale;
        for (std::size_t i = 0; i < nq; ++i) {
            double mx = scores(i, 0);
            for (std::size_t j = 1; j < valid; ++j) mx = std::max(mx, scores(i, j));
            double denom = 0.0;
            for (std::size_t j = 0; j < valid; ++j) {
                double e = std::exp(scores(i, j) - mx);
                (*attn)[i * nk + j] = e;
                denom += e;
            }
            for (std::size_t j = 0; j < valid; ++j) (*attn)[i * nk + j] /= denom;
        }
    }
    if (save_attn) *save_attn = *attn;

    std::vector<double> vals(nq * dv);
    MMap(vals.data(), nq, dv).noalias() = CMap(attn->data(), nq, nk) * cmap(v.data(), nk, dv);

    bool tracked = track({&q, &k, &v});
    Tensor out = make_output({nq, dv}, std::move(vals), tracked);
    if (tracked) {
        autograd::record([qd = q.data(), kd = k.data(), vd = v.data(), od = out.data(), attn, nq,
                          nk, dk, dv, valid, inv_scale]() mutable {
            ensure_grad(qd);
            ensure_grad(kd);
            ensure_grad(vd);
            const auto* go = upstream(od);
            if (!go) return;
            CMap g(go->data(), nq, dv);
            CMap a(attn->data(), nq, nk);
            if (vd->requires_grad) mmap_grad(vd, nk, dv).noalias() += a.transpose() * g;
            if (!qd->requires_grad && !kd->requires_grad) return;
            RowMat dattn = g * cmap(vd, nk, dv).transpose();  // nq x nk
            RowMat dscores = RowMat::Zero(nq, nk);
            for (std::size_t i = 0; i < nq; ++i) {
                double dot = 0.0;
                for (std::size_t j = 0; j < valid; ++j)
                    dot += dattn(i, j) * (*attn)[i * nk + j];
                for (std::size_t j = 0; j < valid; ++j) {
                    dscores(i, j) = (*attn)[i * nk + j] * (dattn(i, j) - dot) * inv_scale;
                }
            }
            if (qd->requires_grad) mmap_grad(qd, nq, dk).noalias() += dscores * cmap(kd, nk, dk);
            if (kd->requires_grad)
                mmap_grad(kd, nk, dk).noalias() += dscores.transpose() * cmap(qd, nq, dk);
        });
    }
    return out;
}

Tensor slice_cols(const Tensor& a, std::size_t start, std::size_t len) {
    require_rank2(a, "slice_cols");
    const std::size_t m = a.rows(), n = a.cols();
    if (len == 0 || start + len > n) {
        throw ShapeError("slice_cols: [" + std::to_string(start) + ", " +
                         std::to_string(start + len) + ") outside " + shape_str(a.shape()));
    }
    std::vector<double> vals(m * len);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < len; ++j) vals[i * len + j] = a.values()[i * n + start + j];

    bool tracked = track({&a});
    Tensor out = make_output({m, len}, std::move(vals), tracked);
    if (tracked) {
        autograd::record([ad = a.data(), od = out.data(), m, n, start, len] {
            ensure_grad(ad);
            const auto* go = upstream(od);
            if (!go) return;
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < len; ++j)
                    ad->grad[i * n + start + j] += (*go)[i * len + j];
        });
    }
    return out;
}

Tensor slice_rows(const Tensor& a, std::size_t start, std::size_t len) {
    require_rank2(a, "slice_rows");
    const std::size_t m = a.rows(), n = a.cols();
    if (len == 0 || start + len > m) {
        throw ShapeError("slice_rows: [" + std::to_string(start) + ", " +
                         std::to_string(start + len) + ") outside " + shape_str(a.shape()));
    }
    std::vector<double> vals(a.values().begin() + start * n, a.values().begin() + (start + len) * n);

    bool tracked = track({&a});
    Tensor out = make_output({len, n}, std::move(vals), tracked);
    if (tracked) {
        autograd::record([ad = a.data(), od = out.data(), n, start, len] {
            ensure_grad(ad);
            const auto* go = upstream(od);
            if (!go) return;
            for (std::size_t i = 0; i < len * n; ++i) ad->grad[start * n + i] += (*go)[i];
        });
    }
    return out;
}

Tensor concat_cols(std::span<const Tensor> parts) {
    if (parts.empty()) throw ShapeError("concat_cols: no inputs");
    const std::size_t m = parts[0].rows();
    std::size_t total = 0;
    for (const Tensor& p : parts) {
        require_rank2(p, "concat_cols");
        if (p.rows() != m) {
            throw ShapeError("concat_cols: row counts disagree, " + shape_str(parts[0].shape()) +
                             " vs " + shape_str(p.shape()));
        }
        total += p.cols();
    }
    std::vector<double> vals(m * total);
    std::size_t off = 0;
    for (const Tensor& p : parts) {
        const std::size_t w = p.cols();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < w; ++j) vals[i * total + off + j] = p.values()[i * w + j];
        off += w;
    }

    bool tracked = false;
    if (autograd::recording()) {
        for (const Tensor& p : parts) tracked = tracked || p.requires_grad();
    }
    Tensor out = make_output({m, total}, std::move(vals), tracked);
    if (tracked) {
        std::vector<Node> nodes;
        nodes.reserve(parts.size());
        for (const Tensor& p : parts) nodes.push_back(p.data());
        autograd::record([nodes = std::move(nodes), od = out.data(), m, total] {
            for (const Node& nd : nodes) ensure_grad(nd);
            const auto* go = upstream(od);
            if (!go) return;
            std::size_t off = 0;
            for (const Node& nd : nodes) {
                const std::size_t w = nd->shape[1];
                if (nd->requires_grad) {
                    for (std::size_t i = 0; i < m; ++i)
                        for (std::size_t j = 0; j < w; ++j)
                            nd->grad[i * w + j] += (*go)[i * total + off + j];
                }
                off += w;
            }
        });
    }
    return out;
}

Tensor concat_rows(std::span<const Tensor> parts) {
    if (parts.empty()) throw ShapeError("concat_rows: no inputs");
    const std::size_t n = parts[0].cols();
    std::size_t total = 0;
    for (const Tensor& p : parts) {
        require_rank2(p, "concat_rows");
        if (p.cols() != n) {
            throw ShapeError("concat_rows: column counts disagree, " +
                             shape_str(parts[0].shape()) + " vs " + shape_str(p.shape()));
        }
        total += p.rows();
    }
    std::vector<double> vals;
    vals.reserve(total * n);
    for (const Tensor& p : parts) vals.insert(vals.end(), p.values().begin(), p.values().end());

    bool tracked = false;
    if (autograd::recording()) {
        for (const Tensor& p : parts) tracked = tracked || p.requires_grad();
    }
    Tensor out = make_output({total, n}, std::move(vals), tracked);
    if (tracked) {
        std::vector<Node> nodes;
        nodes.reserve(parts.size());
        for (const Tensor& p : parts) nodes.push_back(p.data());
        autograd::record([nodes = std::move(nodes), od = out.data()] {
            for (const Node& nd : nodes) ensure_grad(nd);
            const auto* go = upstream(od);
            if (!go) return;
            std::size_t off = 0;
            for (const Node& nd : nodes) {
                const std::size_t cnt = nd->values.size();
                if (nd->requires_grad) {
                    for (std::size_t i = 0; i < cnt; ++i) nd->grad[i] += (*go)[off + i];
                }
                off += cnt;
            }
        });
    }
    return out;
}

Tensor reshape(const Tensor& a, Shape shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    if (n != a.numel() || shape.empty()) {
        throw ShapeError("reshape: cannot view " + shape_str(a.shape()) + " as " +
                         shape_str(shape));
    }
    std::vector<double> vals = a.values();

    bool tracked = track({&a});
    Tensor out = make_output(std::move(shape), std::move(vals), tracked);
    if (tracked) {
        autograd::record([ad = a.data(), od = out.data()] {
            ensure_grad(ad);
            const auto* go = upstream(od);
            if (!go) return;
            for (std::size_t i = 0; i < go->size(); ++i) ad->grad[i] += (*go)[i];
        });
    }
    return out;
}

Tensor rows_lookup(const Tensor& table, const std::vector<int>& ids) {
    require_rank2(table, "rows_lookup");
    const std::size_t rows = table.rows(), n = table.cols();
    if (ids.empty()) throw ShapeError("rows_lookup: empty id sequence");
    std::vector<double> vals(ids.size() * n);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        int id = ids[i];
        if (id < 0 || static_cast<std::size_t>(id) >= rows) {
            throw IndexError("rows_lookup: id " + std::to_string(id) + " outside table of " +
                             std::to_string(rows) + " rows");
        }
        std::copy_n(table.values().begin() + static_cast<std::size_t>(id) * n, n,
                    vals.begin() + i * n);
    }

    bool tracked = track({&table});
    Tensor out = make_output({ids.size(), n}, std::move(vals), tracked);
    if (tracked) {
        autograd::record([td = table.data(), od = out.data(), ids, n] {
            ensure_grad(td);
            const auto* go = upstream(od);
            if (!go) return;
            for (std::size_t i = 0; i < ids.size(); ++i) {
                double* dst = td->grad.data() + static_cast<std::size_t>(ids[i]) * n;
                const double* src = go->data() + i * n;
                for (std::size_t j = 0; j < n; ++j) dst[j] += src[j];
            }
        });
    }
    return out;
}

Tensor mean_rows_masked(const Tensor& a, std::size_t valid) {
    require_rank2(a, "mean_rows_masked");
    const std::size_t m = a.rows(), n = a.cols();
    if (valid == 0 || valid > m) {
        throw ContractError("mean_rows_masked: valid row count " + std::to_string(valid) +
                            " outside [1, " + std::to_string(m) + "]");
    }
    std::vector<double> vals(n, 0.0);
    for (std::size_t i = 0; i < valid; ++i)
        for (std::size_t j = 0; j < n; ++j) vals[j] += a.values()[i * n + j];
    for (double& v : vals) v /= static_cast<double>(valid);

    bool tracked = track({&a});
    Tensor out = make_output({1, n}, std::move(vals), tracked);
    if (tracked) {
        autograd::record([ad = a.data(), od = out.data(), n, valid] {
            ensure_grad(ad);
            const auto* go = upstream(od);
            if (!go) return;
            const double inv = 1.0 / static_cast<double>(valid);
            for (std::size_t i = 0; i < valid; ++i)
                for (std::size_t j = 0; j < n; ++j) ad->grad[i * n + j] += (*go)[j] * inv;
        });
    }
    return out;
}

Tensor dropout(const Tensor& a, double p, std::mt19937_64& rng, bool active) {
    if (p < 0.0 || p >= 1.0) {
        throw ConfigError("dropout rate must be in [0, 1), got " + std::to_string(p));
    }
    if (!active || p == 0.0) return a;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double keep_scale = 1.0 / (1.0 - p);
    auto mask = std::make_shared<std::vector<double>>(a.numel());
    std::vector<double> vals(a.numel());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        (*mask)[i] = unit(rng) < p ? 0.0 : keep_scale;
        vals[i] = a.values()[i] * (*mask)[i];
    }

    bool tracked = track({&a});
    Tensor out = make_output(a.shape(), std::move(vals), tracked);
    if (tracked) {
        autograd::record([ad = a.data(), od = out.data(), mask] {
            ensure_grad(ad);
            const auto* go = upstream(od);
            if (!go) return;
            for (std::size_t i = 0; i < go->size(); ++i) ad->grad[i] += (*go)[i] * (*mask)[i];
        });
    }
    return out;
}

Tensor cross_entropy(const Tensor& probs, const std::vector<int>& gold,
                     const std::vector<double>& weights) {
    require_rank2(probs, "cross_entropy");
    const std::size_t b = probs.rows(), c = probs.cols();
    if (gold.size() != b) {
        throw ShapeError("cross_entropy: " + std::to_string(gold.size()) + " labels for " +
                         std::to_string(b) + " rows");
    }
    if (!weights.empty() && weights.size() != b) {
        throw ShapeError("cross_entropy: weight mask size " + std::to_string(weights.size()) +
                         " for " + std::to_string(b) + " rows");
    }
    double denom = 0.0;
    for (std::size_t i = 0; i < b; ++i) denom += weights.empty() ? 1.0 : weights[i];
    if (denom <= 0.0) throw ContractError("cross_entropy: no unmasked rows");

    double total = 0.0;
    for (std::size_t i = 0; i < b; ++i) {
        int g = gold[i];
        if (g < 0 || static_cast<std::size_t>(g) >= c) {
            throw IndexError("cross_entropy: gold index " + std::to_string(g) + " outside [0, " +
                             std::to_string(c) + ") at row " + std::to_string(i));
        }
        const double w = weights.empty() ? 1.0 : weights[i];
        if (w != 0.0) total -= w * std::log(probs.values()[i * c + static_cast<std::size_t>(g)]);
    }
    total /= denom;

    bool tracked = track({&probs});
    Tensor out = make_output({1}, {total}, tracked);
    if (tracked) {
        autograd::record([pd = probs.data(), od = out.data(), gold, weights, b, c, denom] {
            ensure_grad(pd);
            const auto* go = upstream(od);
            if (!go) return;
            const double g0 = (*go)[0];
            for (std::size_t i = 0; i < b; ++i) {
                const double w = weights.empty() ? 1.0 : weights[i];
                if (w == 0.0) continue;
                const std::size_t idx = i * c + static_cast<std::size_t>(gold[i]);
                pd->grad[idx] -= g0 * w / (denom * pd->values[idx]);
            }
        });
    }
    return out;
}

Tensor l2_penalty(std::span<const Tensor> params, double lambda) {
    double total = 0.0;
    for (const Tensor& p : params) {
        for (double v : p.values()) total += v * v;
    }
    total *= lambda;

    bool tracked = false;
    if (autograd::recording()) {
        for (const Tensor& p : params) tracked = tracked || p.requires_grad();
    }
    Tensor out = make_output({1}, {total}, tracked);
    if (tracked) {
        std::vector<Node> nodes;
        nodes.reserve(params.size());
        for (const Tensor& p : params) nodes.push_back(p.data());
        autograd::record([nodes = std::move(nodes), od = out.data(), lambda] {
            for (const Node& nd : nodes) ensure_grad(nd);
            const auto* go = upstream(od);
            if (!go) return;
            const double g0 = (*go)[0];
            for (const Node& nd : nodes) {
                if (!nd->requires_grad) continue;
                for (std::size_t i = 0; i < nd->values.size(); ++i) {
                    nd->grad[i] += 2.0 * lambda * nd->values[i] * g0;
                }
            }
        });
    }
    return out;
}

}  // namespace lca
