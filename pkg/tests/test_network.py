import numpy as np
import pytest
from pydantic import ValidationError

from conftest import numeric_grad
from network import (
    COMPONENT_GROUPS,
    CheckpointFormatError,
    ConditionLabels,
    DetectionService,
    Drowsiness,
    EyeCondition,
    GlassesIllumination,
    HeadCondition,
    LabelError,
    LabelKind,
    MouthCondition,
    Network,
    NetworkConfig,
    SceneCodes,
    condition_name,
    decode_condition,
    detect,
    detect_backward,
    detect_probabilities,
    encode_condition,
    encode_value,
    fuse,
    fuse_backward,
    group_of,
    harden,
    harden_scene,
    load_checkpoint,
    parameter_specs,
    predict_clip,
    rep_backward,
    rep_forward,
    save_checkpoint,
    scene_backward,
    scene_forward,
)
from network.checkpoint import decode_checkpoint, encode_checkpoint
from network.complexity import operation_counts
from tensorCore import GeometryError, OneHotError, ShapeError, Tensor


def config_with(**updates) -> NetworkConfig:
    return NetworkConfig(**{**NetworkConfig.tiny().model_dump(), **updates})


def random_codes(rng) -> SceneCodes:
    return SceneCodes(
        glasses_illum=Tensor(np.eye(5)[rng.integers(5)]),
        head=Tensor(np.eye(3)[rng.integers(3)]),
        mouth=Tensor(np.eye(3)[rng.integers(3)]),
        eye=Tensor(np.eye(2)[rng.integers(2)]),
    )


# -- condition codes ---------------------------------------------------------


def test_condition_encodings():
    assert encode_condition(GlassesIllumination.DAY_BARE_FACE).tolist() == [1, 0, 0, 0, 0]
    assert encode_condition(EyeCondition.SLEEPINESS).tolist() == [1, 0]
    assert encode_condition(HeadCondition.NODDING).tolist() == [0, 0, 1]
    assert encode_condition(Drowsiness.DROWSY).tolist() == [0, 1]
    assert encode_value(LabelKind.MOUTH, 2).tolist() == [0, 1, 0]


def test_decode_inverts_encode():
    for kind, enum_cls in (
        (LabelKind.GLASSES_ILLUM, GlassesIllumination),
        (LabelKind.HEAD, HeadCondition),
        (LabelKind.MOUTH, MouthCondition),
        (LabelKind.EYE, EyeCondition),
        (LabelKind.DROWSY, Drowsiness),
    ):
        for category in enum_cls:
            assert decode_condition(kind, encode_condition(category)) is category


def test_condition_names():
    assert condition_name(GlassesIllumination.DAY_BARE_FACE) == "Day bare face"
    assert condition_name(GlassesIllumination.DAY_SUNGLASSES) == "Day sunglasses"
    assert condition_name(HeadCondition.LOOKING_ASIDE) == "Looking at both sides"
    assert condition_name(HeadCondition.NODDING) == "Nodding"
    assert condition_name(MouthCondition.TALKING_LAUGHING) == "Talking and laughing"
    assert condition_name(EyeCondition.SLEEPINESS) == "Sleepiness eye"
    assert condition_name(EyeCondition.NORMAL) == "Normal status"


@pytest.mark.parametrize("kind, value", [(LabelKind.GLASSES_ILLUM, 6), (LabelKind.EYE, 0), (LabelKind.DROWSY, 2)])
def test_out_of_range_label(kind, value):
    with pytest.raises(LabelError):
        encode_value(kind, value)


def test_scene_codes_validate_lengths():
    with pytest.raises(OneHotError):
        SceneCodes(
            glasses_illum=Tensor([1, 0, 0]),
            head=Tensor([1, 0, 0]),
            mouth=Tensor([1, 0, 0]),
            eye=Tensor([1, 0]),
        )
    with pytest.raises(OneHotError):
        SceneCodes(
            glasses_illum=Tensor([1, 0, 0, 0, 0]),
            head=Tensor([1, 1, 0]),
            mouth=Tensor([1, 0, 0]),
            eye=Tensor([1, 0]),
        )


def test_condition_labels_codes():
    labels = ConditionLabels(glasses_illum=4, head=3, mouth=1, eye=1, drowsy=1)
    codes = labels.scene_codes()
    assert codes.glasses_illum.tolist() == [0, 0, 0, 1, 0]
    assert codes.head.tolist() == [0, 0, 1]
    assert labels.drowsy_code().tolist() == [0, 1]
    assert labels.values() == (4, 3, 1, 1, 1)


def test_harden_ties_to_lowest_index():
    assert harden(Tensor([0.3, 0.9, 0.9])).tolist() == [0, 1, 0]
    assert harden(Tensor([0.0, 0.0])).tolist() == [1, 0]


# -- configuration and registry ---------------------------------------------


def test_default_representation_shape():
    config = NetworkConfig()
    assert config.input_shape == (1, 5, 32, 32)
    assert config.representation_shape == (32, 1, 5, 5)


def test_tiny_representation_shape(tiny_config):
    assert tiny_config.representation_shape == (4, 1, 1, 1)


def test_non_integral_geometry_is_rejected():
    with pytest.raises(GeometryError):
        NetworkConfig(height=31)  # odd extent before the second pool
    with pytest.raises(GeometryError):
        NetworkConfig(frames=2)
    with pytest.raises(GeometryError):
        config_with(pool_after=(7,))


def test_geometry_from_untrusted_json_stays_a_validation_error():
    with pytest.raises(ValidationError):
        NetworkConfig.model_validate_json('{"height": 31}')


def test_registry_is_complete_and_unique(tiny_net):
    names = [s.name for s in parameter_specs(tiny_net.config)]
    assert len(names) == len(set(names)) == len(tiny_net.names())
    assert {group_of(n) for n in names} == set(COMPONENT_GROUPS)
    assert tiny_net["head.glasses_illum.out.weight"].shape[0] == 5
    assert tiny_net["head.head.out.weight"].shape[0] == 3
    assert tiny_net["head.mouth.out.weight"].shape[0] == 3
    assert tiny_net["head.eye.out.weight"].shape[0] == 2
    assert tiny_net["detector.out.weight"].shape[0] == 2
    assert tiny_net["fusion.out.bias"].shape == (tiny_net.config.fusion_out,)


def test_registry_mismatch_is_rejected(tiny_net):
    params = dict(tiny_net.params)
    del params["fusion.out.bias"]
    with pytest.raises(ShapeError):
        Network(tiny_net.config, params)
    params = dict(tiny_net.params)
    params["fusion.out.bias"] = Tensor.zeros([3])
    with pytest.raises(ShapeError):
        Network(tiny_net.config, params)


def test_initialization_is_seeded(tiny_config):
    assert Network.initialize(tiny_config).equals(Network.initialize(tiny_config))
    other = Network.initialize(config_with(seed=1))
    assert other.checksum() != Network.initialize(tiny_config).checksum()
    assert not Network.initialize(tiny_config)["rep.conv1.bias"].array.any()


# -- forward passes -----------------------------------------------------------


def test_zero_clip_zero_biases_give_zero_representation(tiny_net):
    a, _ = rep_forward(Tensor.zeros(tiny_net.config.input_shape), tiny_net)
    assert a.shape == tiny_net.config.representation_shape
    assert not a.array.any()


def test_default_network_representation_shape():
    config = NetworkConfig()
    a, _ = rep_forward(Tensor.zeros(config.input_shape), Network.zeros(config))
    assert a.shape == (32, 1, 5, 5)


def test_identical_clips_give_identical_representations(tiny_net, tiny_dataset):
    clip = tiny_dataset.clips[0].clip
    a1, _ = rep_forward(clip, tiny_net)
    a2, _ = rep_forward(Tensor(clip.numpy()), tiny_net)
    assert a1.equals(a2)


def test_clip_shape_mismatch_names_both_shapes(tiny_net):
    with pytest.raises(ShapeError, match=r"\[1, 5, 9, 9\].*\[1, 5, 8, 8\]"):
        rep_forward(Tensor.zeros([1, 5, 9, 9]), tiny_net)


def test_scene_heads_zero_case_and_lengths(tiny_config):
    net = Network.zeros(tiny_config)
    logits, _ = scene_forward(Tensor.zeros(tiny_config.representation_shape), net)
    assert [logits[k].size for k in logits] == [5, 3, 3, 2]
    assert all(not t.array.any() for t in logits.values())


def fusion_oracle(a, codes, net):
    d = net.config.fusion_width
    projections = [net["fusion.feature.weight"].array @ a]
    for kind, code in codes.items():
        projections.append(net[f"fusion.{kind.value}.weight"].array @ code.array)
    product = np.zeros(d)
    for i in range(d):
        value = 1.0
        for p in projections:
            value *= p[i]
        product[i] = value
    w, b = net["fusion.out.weight"].array, net["fusion.out.bias"].array
    beta = np.zeros(w.shape[0])
    for m in range(w.shape[0]):
        acc = 0.0
        for i in range(d):
            acc += w[m, i] * product[i]
        beta[m] = acc + b[m]
    return beta


def test_fuse_matches_loop_oracle(rng, tiny_config):
    for seed in range(100):
        net = Network.initialize(config_with(seed=seed))
        a = rng.standard_normal(tiny_config.representation_size)
        codes = random_codes(rng)
        v, cache = fuse(Tensor(a), codes, net)
        np.testing.assert_allclose(cache.beta.array, fusion_oracle(a, codes, net), rtol=0, atol=1e-12)
        assert abs(v.array.sum() - 1.0) <= 1e-12


def test_fuse_identity_weights():
    config = config_with(fusion_width=2, fusion_out=2)
    net = Network.zeros(config)
    updates = {
        "fusion.feature.weight": Tensor([[1.0, 0.0, 0.0, 0.0], [2.0, 0.0, 0.0, 0.0]]),
        "fusion.out.weight": Tensor(np.eye(2)),
    }
    for kind, n in (("glasses_illum", 5), ("head", 3), ("mouth", 3), ("eye", 2)):
        updates[f"fusion.{kind}.weight"] = Tensor.ones([2, n])
    net = net.with_params(updates)
    codes = ConditionLabels(glasses_illum=2, head=1, mouth=3, eye=2, drowsy=0).scene_codes()
    v, cache = fuse(Tensor([1.0, 0.0, 0.0, 0.0]), codes, net)
    assert cache.beta.tolist() == [1.0, 2.0]
    e = np.exp([1.0, 2.0])
    np.testing.assert_allclose(v.array, e / e.sum(), rtol=0, atol=1e-12)


def test_fuse_zero_projection_annihilates(rng, tiny_net):
    out_bias = rng.standard_normal(tiny_net.config.fusion_out)
    net = tiny_net.with_params(
        {
            "fusion.eye.weight": Tensor.zeros(tiny_net["fusion.eye.weight"].shape),
            "fusion.out.bias": Tensor(out_bias),
        }
    )
    _, cache = fuse(Tensor(rng.standard_normal(4)), random_codes(rng), net)
    assert cache.beta.array.tobytes() == out_bias.tobytes()


def test_fuse_backward_matches_finite_differences(rng, tiny_net):
    a = rng.standard_normal(4)
    codes = random_codes(rng)
    g = rng.standard_normal(tiny_net.config.fusion_out)
    v, cache = fuse(Tensor(a), codes, tiny_net)
    d_a, grads = fuse_backward(Tensor(g), tiny_net, cache)

    def loss_a(x):
        return float(g @ fuse(Tensor(x), codes, tiny_net)[0].array)

    np.testing.assert_allclose(d_a.array, numeric_grad(loss_a, a, 1e-5), rtol=1e-5, atol=1e-9)
    for name in ("fusion.feature.weight", "fusion.head.weight", "fusion.out.weight", "fusion.out.bias"):
        base = tiny_net[name].numpy()

        def loss_p(x, name=name):
            return float(g @ fuse(Tensor(a), codes, tiny_net.with_params({name: Tensor(x)}))[0].array)

        np.testing.assert_allclose(grads[name].array, numeric_grad(loss_p, base, 1e-5), rtol=1e-5, atol=1e-9)


def test_hardened_codes_enter_fusion_only_through_the_label_vectors(rng, tiny_config):
    for seed in range(20):
        net = Network.initialize(config_with(seed=seed))
        a = Tensor(rng.standard_normal(tiny_config.representation_shape))
        truth = random_codes(rng)
        logits, _ = scene_forward(a, net)
        hardened = harden_scene(logits)
        _, by_truth = fuse(a, truth, net)
        _, by_hardened = fuse(a, hardened, net)

        assert by_truth.a_flat.equals(by_hardened.a_flat)
        assert by_truth.projections[0].equals(by_hardened.projections[0])
        product = by_hardened.projections[0].array.copy()
        for i, ((kind, t), (_, h)) in enumerate(zip(truth.items(), hardened.items()), start=1):
            column = net[f"fusion.{kind.value}.weight"].array[:, int(np.argmax(h.array))]
            np.testing.assert_array_equal(by_hardened.projections[i].array, column)
            if t.equals(h):
                assert by_truth.projections[i].equals(by_hardened.projections[i])
            product = product * column
        np.testing.assert_allclose(by_hardened.product.array, product, rtol=1e-12, atol=0)
        if all(t.equals(h) for (_, t), (_, h) in zip(truth.items(), hardened.items())):
            assert by_truth.beta.equals(by_hardened.beta)


def test_scene_backward_matches_finite_differences(rng, tiny_net):
    a = rng.standard_normal(4)
    g = {k: rng.standard_normal(n) for k, n in zip(
        (LabelKind.GLASSES_ILLUM, LabelKind.HEAD, LabelKind.MOUTH, LabelKind.EYE), (5, 3, 3, 2)
    )}
    _, cache = scene_forward(Tensor(a), tiny_net)
    d_a, grads = scene_backward({k: Tensor(v) for k, v in g.items()}, tiny_net, cache)

    def loss(x):
        logits, _ = scene_forward(Tensor(x), tiny_net)
        return float(sum(g[k] @ logits[k].array for k in g))

    np.testing.assert_allclose(d_a.array, numeric_grad(loss, a, 1e-5), rtol=1e-5, atol=1e-9)
    assert set(grads) == {n for n in tiny_net.names() if n.startswith("head.")}


def test_detector_symmetry_and_backward(rng, tiny_config):
    zero = Network.zeros(tiny_config)
    logits, _ = detect(Tensor.zeros([tiny_config.fusion_out]), zero)
    assert detect_probabilities(logits).tolist() == [0.5, 0.5]
    for t in (-3.0, 0.0, 7.5):
        assert detect_probabilities(Tensor([t, t])).tolist() == [0.5, 0.5]

    net = Network.initialize(tiny_config)
    v = rng.standard_normal(tiny_config.fusion_out)
    g = rng.standard_normal(2)
    _, cache = detect(Tensor(v), net)
    d_v, grads = detect_backward(Tensor(g), net, cache)
    numeric = numeric_grad(lambda x: float(g @ detect(Tensor(x), net)[0].array), v, 1e-5)
    np.testing.assert_allclose(d_v.array, numeric, rtol=1e-5, atol=1e-9)
    assert set(grads) == {n for n in net.names() if n.startswith("detector.")}


def test_rep_backward_matches_finite_differences(rng, tiny_net, tiny_dataset):
    clip = tiny_dataset.clips[1].clip
    a, cache = rep_forward(clip, tiny_net)
    g = rng.standard_normal(a.shape)
    grads = rep_backward(Tensor(g), tiny_net, cache)
    for name in ("rep.conv1.kernels", "rep.conv4.bias", "rep.conv6.kernels"):
        base = tiny_net[name].numpy()

        def loss(x, name=name):
            return float(np.sum(g * rep_forward(clip, tiny_net.with_params({name: Tensor(x)}))[0].array))

        np.testing.assert_allclose(grads[name].array, numeric_grad(loss, base, 1e-6), rtol=1e-4, atol=1e-8)


# -- inference -----------------------------------------------------------------


def test_zero_network_predicts_half(tiny_config, tiny_dataset):
    prediction = predict_clip(tiny_dataset.clips[0].clip, Network.zeros(tiny_config))
    assert prediction.probabilities == (0.5, 0.5)
    assert prediction.drowsy_probability == 0.5
    assert prediction.drowsy_class == Drowsiness.NON_DROWSY
    assert prediction.scene_names[LabelKind.GLASSES_ILLUM] == "Day bare face"
    assert prediction.scene_names[LabelKind.EYE] == "Sleepiness eye"


def test_detection_service_is_deterministic(tiny_net, tiny_dataset):
    service = DetectionService(tiny_net)
    clips = [c.clip for c in tiny_dataset.clips[:3]]
    assert service.predict_many(clips) == service.predict_many(clips)


def test_predict_rejects_wrong_extents(tiny_net):
    with pytest.raises(ShapeError):
        predict_clip(Tensor.zeros([1, 5, 16, 16]), tiny_net)


# -- checkpoint -------------------------------------------------------------------


def test_checkpoint_round_trip_is_bitwise(tmp_path, tiny_net):
    path = tmp_path / "net.cadn"
    save_checkpoint(tiny_net, path)
    loaded = load_checkpoint(path)
    assert loaded.equals(tiny_net)
    assert loaded.checksum() == tiny_net.checksum()
    assert loaded.names() == tiny_net.names()


@pytest.mark.parametrize(
    "mutate",
    [
        lambda data: b"",
        lambda data: b"XXXX" + data[4:],
        lambda data: data[:4] + (2).to_bytes(4, "little") + data[8:],
        lambda data: data[:-3],
        lambda data: data + b"\x00",
    ],
    ids=["empty", "magic", "version", "truncated", "trailing"],
)
def test_corrupt_checkpoints_are_rejected(tiny_net, mutate):
    with pytest.raises(CheckpointFormatError):
        decode_checkpoint(mutate(encode_checkpoint(tiny_net)))


# -- cost accounting ------------------------------------------------------------------


def test_operation_counts_follow_forward_shapes(tiny_net, tiny_dataset):
    config = tiny_net.config
    report = operation_counts(config)
    _, cache = rep_forward(tiny_dataset.clips[0].clip, tiny_net)
    expected_conv = 0
    for i, pre in enumerate(cache.pre_activations, start=1):
        c_out, od, oh, ow = pre.shape
        kernels = tiny_net[f"rep.conv{i}.kernels"].shape
        expected_conv += od * oh * ow * c_out * kernels[1] * kernels[2] * kernels[3] * kernels[4]
    assert report.total("rep.") == expected_conv

    expected_heads = sum(
        w.size for n, w in tiny_net.params.items() if n.startswith("head.") and n.endswith(".weight")
    )
    assert report.total("head.") == expected_heads
    d = config.fusion_width
    assert report.total("fusion.") == 4 * d + 13 * d + 4 * d + config.fusion_out * d
    assert report.total("detector.") == 8 * 8 + 8 * 2
    assert report.total() == sum(layer.macs for layer in report.layers)


def test_default_conv_cost():
    report = operation_counts(NetworkConfig())
    # conv1: 3x30x30 outputs x 8 channels x 27 taps
    assert report.layers[0].name == "rep.conv1"
    assert report.layers[0].macs == 3 * 30 * 30 * 8 * 1 * 27
