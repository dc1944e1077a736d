MAX_PARAMS = 8


def validate_param_texts(texts):
    errors = []
    if not texts:
        errors.append("At least one parameter expression is required.")
    if len(texts) > MAX_PARAMS:
        errors.append(f"At most {MAX_PARAMS} parameters are supported.")
    for idx, text in enumerate(texts, start=1):
        if not (text or "").strip():
            errors.append(f"Parameter {idx}: empty expression.")
    return errors


def validate_screen_args(coeff_bound, k):
    errors = []
    if coeff_bound < 1:
        errors.append("Screen coefficient bound must be >= 1.")
    # (2M+1)^k кортежа, над това е прекалено за brute force
    if (2 * coeff_bound + 1) ** k > 10**7:
        errors.append(f"Screen box (2*{coeff_bound}+1)^{k} is too large for brute force.")
    return errors
