#include <ctype.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

/* Reads "key = value" lines and prints them sorted by key. */

struct entry {
    char key[64];
    char value[192];
};

static int compare_entries(const void *a, const void *b)
{
    const struct entry *x = a;
    const struct entry *y = b;
    return strcmp(x->key, y->key);
}

static char *trim(char *s)
{
    char *end;

    while (isspace((unsigned char)*s))
        s++;
    if (*s == '\0')
        return s;
    end = s + strlen(s) - 1;
    while (end > s && isspace((unsigned char)*end))
        *end-- = '\0';
    return s;
}

int main(int argc, char **argv)
{
    struct entry *entries = NULL;
    size_t count = 0, capacity = 0;
    char line[512];
    FILE *in = stdin;

    if (argc > 1) {
        in = fopen(argv[1], "r");
        if (in == NULL) {
            perror(argv[1]);
            return 1;
        }
    }

    while (fgets(line, sizeof line, in) != NULL) {
        char *eq = strchr(line, '=');
        char *key, *value;

        if (line[0] == '#' || eq == NULL)
            continue;
        *eq = '\0';
        key = trim(line);
        value = trim(eq + 1);
        if (count == capacity) {
            capacity = capacity ? capacity * 2 : 16;
            entries = realloc(entries, capacity * sizeof *entries);
            if (entries == NULL) {
                fputs("out of memory\n", stderr);
                return 1;
            }
        }
        snprintf(entries[count].key, sizeof entries[count].key, "%s", key);
        snprintf(entries[count].value, sizeof entries[count].value, "%s", value);
        count++;
    }

    qsort(entries, count, sizeof *entries, compare_entries);
    for (size_t i = 0; i < count; i++)
        printf("%-20s %s\n", entries[i].key, entries[i].value);

    free(entries);
    if (in != stdin)
        fclose(in);
    return 0;
}
