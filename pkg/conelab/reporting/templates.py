"""Text templates for run summaries."""

from jinja2 import Template

SUMMARY_TEMPLATE = Template("""# ConeLab run

Seed: {{ report.seed }}
Failures: {{ report.failures }} of {{ report.records | length }} checks

| suite | checks | failures |
|---|---|---|
{% for suite in report.suites -%}
| {{ suite.suite }} | {{ suite.records | length }} | {{ suite.failures }} |
{% endfor %}
{% if failed %}
## Failing checks

| suite | check | value | tol |
|---|---|---|---|
{% for r in failed -%}
| {{ r.suite }} | {{ r.check }} | {{ "%.3e" | format(r.value) }} | {{ "%.1e" | format(r.tol) }} |
{% endfor %}
{% endif %}""")
