def parse_word_lines(lines):
    """
    Парсвам файл с building words: една дума на ред, цифри разделени с интервал,
    '#' започва коментар. Връщам (думи, грешки) за да се покажат всички наведнъж.
    """
    words = []
    errors = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            words.append(tuple(int(tok) for tok in line.split()))
        except ValueError:
            errors.append(f"Line {lineno}: invalid digit in {line!r}.")
    if not words and not errors:
        errors.append("No building words found.")
    return words, errors


def validate_words(words, k):
    errors = []
    if not words:
        errors.append("At least one building word is required.")
    for idx, word in enumerate(words):
        for d in word:
            if not 1 <= d <= k:
                errors.append(f"Word {idx}: digit {d} outside 1..{k}.")
                break
    if words and not words[0]:
        errors.append("The first building word must not be empty.")
    return errors


def validate_digits(digits, k):
    errors = []
    if not digits:
        errors.append("Digit list is empty.")
    bad = sorted({d for d in digits if not 1 <= d <= k})
    if bad:
        errors.append(f"Digits {bad} outside 1..{k}.")
    return errors
