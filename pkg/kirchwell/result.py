from tabulate import tabulate


class Result(object):

    """Pass/fail record of one verification run.

    Rows are ``(criterion, passed, measured, tolerance)``; ``measured`` and
    ``tolerance`` are free-form (numbers or short strings).
    """

    def __init__(self, suite=None):
        self.suite = suite
        self.records = []
        self.success = 0
        self.error = 0
        self.error_items = []

    def append(self, row):
        criterion, passed, measured, tolerance = row
        passed = bool(passed)

        self.records.append({
            'criterion': criterion,
            'passed': passed,
            'measured': _plain(measured),
            'tolerance': _plain(tolerance),
        })
        if passed:
            self.success += 1
        else:
            self.error += 1
            self.error_items.append(criterion)

    def extend(self, other):
        for record in other.records:
            self.append((record['criterion'], record['passed'],
                         record['measured'], record['tolerance']))

    @property
    def passed(self):
        return self.error == 0

    def to_dict(self):
        return {
            'suite': self.suite,
            'passed': self.passed,
            'success': self.success,
            'error': self.error,
            'criteria': self.records,
        }

    def write(self):
        if self.error > 0:
            error_headers = ["Criterion", "Measured", "Tolerance"]
            error_result = []
            for record in self.records:
                if not record['passed']:
                    error_result.append([record['criterion'],
                                         record['measured'],
                                         record['tolerance']])

            print("****** FAILED CRITERIA ******")
            print(tabulate(error_result, headers=error_headers))
            print("\n")

        headers = ["Metric", "Count"]
        result = [
                    ["Passed", self.success],
                    ["Failed", self.error],
                 ]

        print("****** SUMMARY ******")
        print(tabulate(result, headers=headers))


def _plain(value):
    if hasattr(value, 'item'):
        value = value.item()
    if isinstance(value, float):
        return float('%.12g' % value)
    return value
